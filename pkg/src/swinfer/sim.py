"""Replication harness for the Gaussian mean-shift experiment.

Each cell of a plan fixes a direction budget k and a shift offset h; each
replication draws X from N(0, I_d), Y from N((sqrt(d) + h) e_1, I_d) and a
fresh direction sample, then runs the full inference pipeline against the
null value delta. At h = 0 the population sliced cost equals d/d = 1, so
delta = 1 makes the null true and the rejection rate should track the test
level; h > 0 pushes the cost above delta and rejections measure power.

Every replication derives its three substreams (X rows, Y rows, directions)
from the master seed and the cell and replication indices alone, so results
are bit-identical for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import sqrt

import numpy as np
from scipy.special import ndtri

from ._textio import dump_json, format_float
from .distributions import GaussianSpec, sample_gaussian
from .geometry import sample_directions
from .inference import DegenerateVarianceError, analyze

# substream ids 0..15 are reserved for direct CLI use
_STREAM_BASE = 16
_ROLE_X, _ROLE_Y, _ROLE_DIRS, _ROLE_CELL_DIRS = 0, 1, 2, 3


@dataclass(frozen=True)
class SimulationPlan:
    """Cross of direction budgets and shifts, replicated under one seed."""

    d: int
    n: int
    m: int
    k_values: tuple[int, ...]
    h_values: tuple[float, ...]
    delta: float
    replications: int
    master_seed: int
    p: float = 2.0
    level: float = 0.95
    reuse_directions: bool = False

    def __post_init__(self):
        object.__setattr__(self, "k_values",
                           tuple(int(k) for k in self.k_values))
        object.__setattr__(self, "h_values",
                           tuple(float(h) for h in self.h_values))
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        if not 0.0 < self.level < 1.0:
            raise ValueError(f"level must lie in (0, 1), got {self.level}")
        if not self.k_values or any(k < 2 for k in self.k_values):
            raise ValueError("every direction budget must be at least 2")
        if not self.h_values:
            raise ValueError("need at least one shift value")
        if self.d < 1 or self.n < 2 or self.m < 2:
            raise ValueError("need d >= 1 and n, m >= 2")

    @property
    def cells(self) -> list[tuple[int, float]]:
        return [(k, h) for k in self.k_values for h in self.h_values]


@dataclass(frozen=True, eq=False)
class CellResult:
    """Outcome of one (k, h) cell."""

    k: int
    h: float
    statistics: np.ndarray
    rejection_rate: float
    hist_edges: np.ndarray
    hist_counts: np.ndarray
    excluded: int


@dataclass(frozen=True, eq=False)
class SimulationResult:
    plan: SimulationPlan
    cells: list[CellResult]


def histogram(values, bin_count: int) -> tuple[np.ndarray, np.ndarray]:
    """Equal-width histogram over [min, max]; counts sum to len(values)."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("cannot histogram an empty vector")
    if bin_count < 1:
        raise ValueError("bin_count must be at least 1")
    counts, edges = np.histogram(values, bins=bin_count)
    return edges, counts


def _replication_streams(plan: SimulationPlan, cell_index: int,
                         rep_index: int) -> tuple[int, int, int]:
    base = _STREAM_BASE + (cell_index * plan.replications + rep_index) * 4
    if plan.reuse_directions:
        dirs_stream = _STREAM_BASE + cell_index * plan.replications * 4 + _ROLE_CELL_DIRS
    else:
        dirs_stream = base + _ROLE_DIRS
    return base + _ROLE_X, base + _ROLE_Y, dirs_stream


def _one_replication(plan: SimulationPlan, cell_index: int, rep_index: int,
                     k: int, h: float) -> float | None:
    sx, sy, sd = _replication_streams(plan, cell_index, rep_index)
    shift = np.zeros(plan.d)
    shift[0] = sqrt(plan.d) + h
    X = sample_gaussian(GaussianSpec(np.zeros(plan.d)), plan.n,
                        plan.master_seed, sx)
    Y = sample_gaussian(GaussianSpec(shift), plan.m, plan.master_seed, sy)
    dirs = sample_directions(plan.d, k, plan.master_seed, sd)
    try:
        report = analyze(X, Y, dirs, p=plan.p, delta=plan.delta,
                         level=plan.level)
    except DegenerateVarianceError:
        return None
    return report.statistic


def run_plan(plan: SimulationPlan, threads: int = 1,
             hist_bins: int = 40) -> SimulationResult:
    """Execute every replication of every cell of a plan.

    Parameters
    ----------
    plan : SimulationPlan
    threads : int
        Worker bound; the result is bit-identical for every value because
        replications are independent and reductions run in index order.
    hist_bins : int
        Bin count for the per-cell statistic histogram.

    Returns
    -------
    SimulationResult
        Per cell: the statistic vector (degenerate replications excluded
        with a count), the rejection rate at the plan level, histogram data.
    """
    if plan.p != 2.0:
        raise ValueError("the replication harness requires p = 2")
    tasks = [(ci, ri, k, h)
             for ci, (k, h) in enumerate(plan.cells)
             for ri in range(plan.replications)]

    def work(task):
        ci, ri, k, h = task
        return _one_replication(plan, ci, ri, k, h)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(work, tasks))
    else:
        outcomes = [work(t) for t in tasks]

    q = float(ndtri(0.5 + 0.5 * plan.level))
    cells = []
    for ci, (k, h) in enumerate(plan.cells):
        block = outcomes[ci * plan.replications:(ci + 1) * plan.replications]
        stats = np.asarray([t for t in block if t is not None], dtype=np.float64)
        excluded = plan.replications - stats.size
        if stats.size:
            rate = float(np.mean(np.abs(stats) > q))
            edges, counts = histogram(stats, hist_bins)
        else:
            rate = float("nan")
            edges, counts = np.zeros(1), np.zeros(0, dtype=np.int64)
        cells.append(CellResult(k=k, h=h, statistics=stats,
                                rejection_rate=rate, hist_edges=edges,
                                hist_counts=counts, excluded=excluded))
    return SimulationResult(plan=plan, cells=cells)


def result_csv_text(result: SimulationResult) -> str:
    """One row per kept replication: cell ids, statistic, reject flag."""
    q = float(ndtri(0.5 + 0.5 * result.plan.level))
    lines = ["k,h,replication,statistic,reject"]
    for cell in result.cells:
        for ri, t in enumerate(cell.statistics):
            flag = int(abs(t) > q)
            lines.append(f"{cell.k},{format_float(cell.h)},{ri},"
                         f"{format_float(t)},{flag}")
    return "\n".join(lines) + "\n"


def result_json_text(result: SimulationResult) -> str:
    """Per-cell summary: rejection rate, exclusions, histogram."""
    plan = result.plan
    doc = {
        "plan": {
            "p": plan.p, "d": plan.d, "n": plan.n, "m": plan.m,
            "k_values": list(plan.k_values),
            "h_values": list(plan.h_values),
            "delta": plan.delta,
            "replications": plan.replications,
            "level": plan.level,
            "master_seed": plan.master_seed,
            "reuse_directions": plan.reuse_directions,
        },
        "cells": [
            {
                "k": cell.k,
                "h": cell.h,
                "rejection_rate": (None if np.isnan(cell.rejection_rate)
                                   else cell.rejection_rate),
                "excluded": cell.excluded,
                "histogram": {
                    "edges": [float(e) for e in cell.hist_edges],
                    "counts": [int(c) for c in cell.hist_counts],
                },
            }
            for cell in result.cells
        ],
    }
    return dump_json(doc) + "\n"
