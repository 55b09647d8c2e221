"""Command-line front end: estimate, test and simulate.

Inputs are headerless CSV files of floats, one observation per row; the
coordinate dimension is inferred and cross-checked between files. Reports
are JSON or CSV with floats at 17 significant digits, so emitted numbers
re-parse bit-exactly. Every flag has an environment fallback named
SWINFER_<FLAG>; an explicit flag wins over the environment.

Exit codes: 0 on success, 2 on any input problem, 3 when the variance
estimate degenerates to zero and no statistic exists.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from ._textio import InputError, dump_json, format_float, read_matrix_csv, write_text
from .estimators import SlicedEstimate, _direction_pass, combined_variance, w_hat_sq
from .geometry import SampleMatrix, sample_directions
from .inference import (DegenerateVarianceError, confidence_interval,
                        effective_rate, test_statistic, two_sided_pvalue)
from .sim import SimulationPlan, result_csv_text, result_json_text, run_plan

ENV_PREFIX = "SWINFER_"

# substream for direction draws in estimate/test; ids below 16 are reserved
# for direct CLI use, the replication harness starts at 16
_DIRECTIONS_STREAM = 1

_EXIT_OK = 0
_EXIT_INPUT = 2
_EXIT_DEGENERATE = 3

_PLAN_REQUIRED = ("d", "n", "m", "h_values", "delta", "replications", "master_seed")
_PLAN_OPTIONAL = {"p": 2.0, "level": 0.95, "reuse_directions": False}


def _env(name: str) -> str | None:
    return os.environ.get(ENV_PREFIX + name)


def _resolve(flag_value, name: str, cast, default=None, required: bool = False):
    """Flag value if given, else environment, else default."""
    if flag_value is not None:
        return flag_value
    raw = _env(name)
    if raw is not None:
        try:
            return cast(raw)
        except ValueError as exc:
            raise InputError(f"bad {ENV_PREFIX}{name}={raw!r}: {exc}") from exc
    if required:
        raise InputError(f"missing --{name.lower().replace('_', '-')} "
                         f"(or {ENV_PREFIX}{name})")
    return default


def _resolve_bool(flag_value: bool, name: str) -> bool:
    if flag_value:
        return True
    raw = _env(name)
    return raw is not None and raw.strip().lower() in ("1", "true", "yes", "on")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swinfer",
        description="Sliced transport-cost estimation and two-sample inference.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_data: bool):
        if with_data:
            p.add_argument("--x", help="CSV file with the first sample")
            p.add_argument("--y", help="CSV file with the second sample")
            p.add_argument("--k", type=int, help="number of random directions")
            p.add_argument("--p", type=float, help="cost exponent, must exceed 1")
            p.add_argument("--w-only", action="store_true", dest="w_only",
                           help="studentize by projection variance alone "
                                "(required for p != 2, needs small k)")
        p.add_argument("--level", type=float, help="confidence level (default 0.95)")
        p.add_argument("--seed", type=int, help="seed for all randomness")
        p.add_argument("--threads", type=int, help="worker bound (default 1)")
        p.add_argument("--format", choices=("csv", "json"), dest="fmt",
                       help="report format (default json)")
        p.add_argument("--out", help="output path (default: print to stdout)")

    add_common(sub.add_parser("estimate", help="point estimate with variance"),
               with_data=True)
    tp = sub.add_parser("test", help="two-sided test of a null value")
    add_common(tp, with_data=True)
    tp.add_argument("--delta", type=float, help="null value of the sliced cost")
    sp = sub.add_parser("simulate", help="run a replication plan")
    sp.add_argument("--plan", help="JSON plan file")
    add_common(sp, with_data=False)
    return parser


def _load_samples(args) -> tuple[SampleMatrix, SampleMatrix, str, str]:
    x_path = _resolve(args.x, "X", str, required=True)
    y_path = _resolve(args.y, "Y", str, required=True)
    X = read_matrix_csv(x_path)
    Y = read_matrix_csv(y_path)
    if X.shape[0] < 2 or Y.shape[0] < 2:
        raise InputError("each sample needs at least 2 rows")
    if X.shape[1] != Y.shape[1]:
        raise InputError(f"dimension mismatch: {x_path} has d={X.shape[1]}, "
                         f"{y_path} has d={Y.shape[1]}")
    return SampleMatrix(X), SampleMatrix(Y), x_path, y_path


def _common_values(args):
    p = _resolve(args.p, "P", float, default=2.0)
    k = _resolve(args.k, "K", int, required=True)
    level = _resolve(args.level, "LEVEL", float, default=0.95)
    seed = _resolve(args.seed, "SEED", int, default=0)
    threads = _resolve(args.threads, "THREADS", int, default=1)
    fmt = _resolve(args.fmt, "FORMAT", str, default="json")
    out = _resolve(args.out, "OUT", str, default=None)
    if fmt not in ("csv", "json"):
        raise InputError(f"format must be csv or json, got {fmt!r}")
    if k < 2:
        raise InputError(f"need at least 2 directions, got k={k}")
    if not 0.0 < level < 1.0:
        raise InputError(f"level must lie in (0, 1), got {level}")
    if threads < 1:
        raise InputError(f"threads must be positive, got {threads}")
    if not p > 1.0:
        raise InputError(f"cost exponent must exceed 1, got {p}")
    return p, k, level, seed, threads, fmt, out


def _emit_report(doc: dict, fmt: str, out: str | None) -> None:
    if fmt == "json":
        text = dump_json(doc) + "\n"
    else:
        keys = list(doc.keys())
        cells = []
        for key in keys:
            val = doc[key]
            if isinstance(val, bool):
                cells.append(str(int(val)))
            elif isinstance(val, float):
                cells.append(format_float(val))
            elif val is None:
                cells.append("")
            else:
                cells.append(str(val))
        text = ",".join(keys) + "\n" + ",".join(cells) + "\n"
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def _variance_pieces(X, Y, dirs, p, threads, w_only):
    """Estimate, dispersion and (when available) the full variance blend."""
    n, m, k = X.n, Y.n, dirs.k
    want_potentials = (p == 2.0) and not w_only
    per_direction, g_x, g_y = _direction_pass(X, Y, dirs, p,
                                              want_costs=True,
                                              want_potentials=want_potentials,
                                              threads=threads)
    est = SlicedEstimate(sw_pp=float(np.mean(per_direction)),
                         per_direction=per_direction, p=p, n=n, m=m, k=k)
    w = w_hat_sq(est)
    if want_potentials:
        vc = combined_variance(n, m, k, w.value,
                               float(np.var(g_x)), float(np.var(g_y)))
        mode = "combined"
    elif w_only:
        r = n * m / (n + m)
        if k > 0.1 * r:
            raise InputError(
                f"w_only studentization needs k <= 0.1 * nm/(n+m) = {0.1 * r:.3g}, "
                f"got k = {k}")
        vc = combined_variance(n, m, k, w.value, 0.0, 0.0)
        mode = "w_only"
    else:
        vc = None
        mode = "none"
    return est, w, vc, mode


def cmd_estimate(args) -> int:
    p, k, level, seed, threads, fmt, out = _common_values(args)
    X, Y, x_path, y_path = _load_samples(args)
    w_only = _resolve_bool(args.w_only, "W_ONLY")
    if w_only and p == 2.0:
        raise InputError("w_only applies to p != 2; p = 2 always uses the blend")
    dirs = sample_directions(X.d, k, seed, _DIRECTIONS_STREAM)
    est, w, vc, mode = _variance_pieces(X, Y, dirs, p, threads, w_only)
    doc = {
        "command": "estimate",
        "x": x_path, "y": y_path,
        "n": est.n, "m": est.m, "d": X.d, "k": k,
        "p": p, "seed": seed, "level": level,
        "estimate": est.sw_pp,
        "w_hat_sq": w.value,
        "w_hat_clamped": w.clamped,
        "variance_mode": mode,
    }
    if vc is not None:
        low, high = confidence_interval(est.sw_pp, est.n, est.m, k,
                                        vc.combined, level)
        doc.update({
            "v_hat_pq_sq": vc.v_hat_pq_sq,
            "v_hat_qp_sq": vc.v_hat_qp_sq,
            "tau_hat": vc.tau_hat,
            "lambda_hat": vc.lambda_hat,
            "combined_variance": vc.combined,
            "effective_rate": effective_rate(est.n, est.m, k),
            "ci_low": low, "ci_high": high,
        })
    else:
        doc.update({"ci_low": None, "ci_high": None,
                    "note": "no potential-based variance at p != 2; "
                            "pass --w-only with a small k for an interval"})
    _emit_report(doc, fmt, out)
    return _EXIT_OK


def cmd_test(args) -> int:
    p, k, level, seed, threads, fmt, out = _common_values(args)
    delta = _resolve(args.delta, "DELTA", float, required=True)
    X, Y, x_path, y_path = _load_samples(args)
    w_only = _resolve_bool(args.w_only, "W_ONLY")
    if p != 2.0 and not w_only:
        raise InputError("testing with p != 2 requires --w-only "
                         "(no potential-based variance exists there)")
    if w_only and p == 2.0:
        raise InputError("w_only applies to p != 2; p = 2 always uses the blend")
    dirs = sample_directions(X.d, k, seed, _DIRECTIONS_STREAM)
    est, w, vc, mode = _variance_pieces(X, Y, dirs, p, threads, w_only)
    statistic = test_statistic(est.sw_pp, delta, est.n, est.m, k, vc.combined)
    p_value = two_sided_pvalue(statistic)
    low, high = confidence_interval(est.sw_pp, est.n, est.m, k, vc.combined, level)
    doc = {
        "command": "test",
        "x": x_path, "y": y_path,
        "n": est.n, "m": est.m, "d": X.d, "k": k,
        "p": p, "seed": seed, "level": level,
        "delta": delta,
        "estimate": est.sw_pp,
        "w_hat_sq": w.value,
        "w_hat_clamped": w.clamped,
        "v_hat_pq_sq": vc.v_hat_pq_sq,
        "v_hat_qp_sq": vc.v_hat_qp_sq,
        "tau_hat": vc.tau_hat,
        "lambda_hat": vc.lambda_hat,
        "combined_variance": vc.combined,
        "effective_rate": effective_rate(est.n, est.m, k),
        "statistic": statistic,
        "p_value": p_value,
        "reject": bool(p_value < 1.0 - level),
        "ci_low": low, "ci_high": high,
        "variance_mode": mode,
    }
    _emit_report(doc, fmt, out)
    return _EXIT_OK


def _load_plan(path: str, seed_override: int | None) -> SimulationPlan:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot open {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise InputError(f"{path}: plan must be a JSON object")
    raw = dict(raw)
    if "k" in raw and "k_values" not in raw:
        raw["k_values"] = [raw.pop("k")]
    missing = [key for key in _PLAN_REQUIRED + ("k_values",) if key not in raw]
    if missing:
        raise InputError(f"{path}: plan lacks fields {missing}")
    known = set(_PLAN_REQUIRED) | {"k_values"} | set(_PLAN_OPTIONAL)
    unknown = sorted(set(raw) - known)
    if unknown:
        raise InputError(f"{path}: unknown plan fields {unknown}")
    fields = {key: raw[key] for key in _PLAN_REQUIRED + ("k_values",)}
    for key, default in _PLAN_OPTIONAL.items():
        fields[key] = raw.get(key, default)
    if seed_override is not None:
        fields["master_seed"] = seed_override
    try:
        return SimulationPlan(
            d=int(fields["d"]), n=int(fields["n"]), m=int(fields["m"]),
            k_values=tuple(int(k) for k in fields["k_values"]),
            h_values=tuple(float(h) for h in fields["h_values"]),
            delta=float(fields["delta"]),
            replications=int(fields["replications"]),
            master_seed=int(fields["master_seed"]),
            p=float(fields["p"]), level=float(fields["level"]),
            reuse_directions=bool(fields["reuse_directions"]))
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: invalid plan: {exc}") from exc


def cmd_simulate(args) -> int:
    plan_path = _resolve(args.plan, "PLAN", str, required=True)
    seed = _resolve(args.seed, "SEED", int, default=None)
    threads = _resolve(args.threads, "THREADS", int, default=1)
    out = _resolve(args.out, "OUT", str, default="simulation")
    if threads < 1:
        raise InputError(f"threads must be positive, got {threads}")
    plan = _load_plan(plan_path, seed)
    try:
        result = run_plan(plan, threads=threads)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    csv_path, json_path = out + ".csv", out + ".json"
    write_text(csv_path, result_csv_text(result))
    write_text(json_path, result_json_text(result))
    sys.stdout.write("k h rejection_rate excluded\n")
    for cell in result.cells:
        rate = "nan" if np.isnan(cell.rejection_rate) \
            else format(cell.rejection_rate, ".4f")
        sys.stdout.write(f"{cell.k} {format_float(cell.h)} {rate} "
                         f"{cell.excluded}\n")
    sys.stdout.write(f"wrote {csv_path} and {json_path}\n")
    return _EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"estimate": cmd_estimate, "test": cmd_test,
                "simulate": cmd_simulate}
    try:
        return handlers[args.command](args)
    except DegenerateVarianceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_DEGENERATE
    except (InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
