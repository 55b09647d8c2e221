"""Text interchange helpers: strict CSV parsing and round-trip JSON.

Floats are printed with 17 significant digits everywhere, which is enough
for IEEE doubles to re-parse to the identical bit pattern, so every report
emitted by this package round-trips exactly. The JSON emitter is hand
rolled because the stdlib encoder offers no control over float formatting.
"""

from __future__ import annotations

import json
import math

import numpy as np


class InputError(ValueError):
    """A user-supplied file or value failed to parse or validate."""


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    return format(x, ".17g")


def dump_json(obj, indent: int = 0) -> str:
    """Serialize dicts, lists, strings, bools, ints, floats and None.

    Dict keys keep insertion order; floats go through :func:`format_float`.
    """
    pad = " " * indent
    inner = " " * (indent + 2)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [f"{inner}{json.dumps(str(key))}: {dump_json(val, indent + 2)}"
                 for key, val in obj.items()]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        parts = [f"{inner}{dump_json(val, indent + 2)}" for val in seq]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def read_matrix_csv(path: str) -> np.ndarray:
    """Parse a headerless CSV of floats, one observation per row.

    Raises InputError with the offending line number on any malformed row
    or inconsistent column count.
    """
    rows: list[list[float]] = []
    width = None
    try:
        handle = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot open {path}: {exc}") from exc
    with handle:
        for lineno, line in enumerate(handle, 1):
            text = line.strip()
            if not text:
                continue
            fields = text.split(",")
            try:
                row = [float(f) for f in fields]
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: not a float row: {exc}") from exc
            if any(not math.isfinite(v) for v in row):
                raise InputError(f"{path}:{lineno}: non-finite value")
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise InputError(
                    f"{path}:{lineno}: expected {width} columns, got {len(row)}")
            rows.append(row)
    if not rows:
        raise InputError(f"{path}: no data rows")
    return np.asarray(rows, dtype=np.float64)


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
