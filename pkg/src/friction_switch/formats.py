"""File formats: trace and curve CSV, JSON documents, atomic writes."""
from __future__ import annotations

import csv
import io as _io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import TraceFormatError
from .model import FrictionCurve, FrictionSample
from .rig import (
    PHASE_CONCENTRIC_DWELL,
    PHASE_ECCENTRIC_DWELL,
    PHASE_MOVING,
    PHASE_SETTLING,
    PHASE_UNKNOWN,
    ForceTrace,
    LoadCase,
)

__all__ = [
    "TRACE_HEADER",
    "CURVE_HEADER",
    "atomic_write_text",
    "write_json",
    "read_json",
    "trace_to_csv",
    "trace_from_csv",
    "write_trace_csv",
    "read_trace_csv",
    "curve_to_csv",
    "curve_from_csv",
    "write_curve_csv",
    "read_curve_csv",
]

TRACE_HEADER = ("time_s", "force_N", "position_mm", "phase")
CURVE_HEADER = ("load_N", "friction_N", "sigma_N", "label")

_PHASE_TO_CSV = {
    PHASE_UNKNOWN: "unknown",
    PHASE_MOVING: "move",
    PHASE_SETTLING: "settle",
    PHASE_ECCENTRIC_DWELL: "ecc",
    PHASE_CONCENTRIC_DWELL: "conc",
}
_CSV_TO_PHASE = {v: k for k, v in _PHASE_TO_CSV.items()}


def _num(x) -> str:
    # shortest repr that round-trips exactly
    return repr(float(x))


def atomic_write_text(path, text: str) -> Path:
    """Write ``text`` to a sibling temp file, then rename it over ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    return path


def write_json(path, obj) -> Path:
    return atomic_write_text(path, json.dumps(obj, indent=2) + "\n")


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def trace_to_csv(trace: ForceTrace) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    phases = [_PHASE_TO_CSV[int(p)] for p in trace.phases]
    for t, f, x, p in zip(trace.timestamps, trace.forces, trace.positions, phases):
        writer.writerow((_num(t), _num(f), _num(x), p))
    return buf.getvalue()


def trace_from_csv(text: str, load_case: LoadCase, seed: int = 0, direction=None, source: str = "<trace>") -> ForceTrace:
    reader = csv.reader(_io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != TRACE_HEADER:
        raise TraceFormatError(f"{source}: expected header {','.join(TRACE_HEADER)}")
    cols = ([], [], [], [])
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 4:
            raise TraceFormatError(f"{source}:{lineno}: expected 4 fields, got {len(row)}")
        try:
            values = [float(v) for v in row[:3]]
        except ValueError:
            raise TraceFormatError(f"{source}:{lineno}: non-numeric field") from None
        phase = row[3].strip() or "unknown"
        if phase not in _CSV_TO_PHASE:
            raise TraceFormatError(f"{source}:{lineno}: unknown phase {phase!r}")
        for col, v in zip(cols, values + [_CSV_TO_PHASE[phase]]):
            col.append(v)
    t, f, x, p = cols
    return ForceTrace(
        timestamps=np.array(t, dtype=float),
        forces=np.array(f, dtype=float),
        positions=np.array(x, dtype=float),
        phases=np.array(p, dtype=np.int8),
        load_case=load_case,
        seed=seed,
        direction=direction,
    )


def write_trace_csv(path, trace: ForceTrace) -> Path:
    return atomic_write_text(path, trace_to_csv(trace))


def read_trace_csv(path, load_case: LoadCase, seed: int = 0, direction=None) -> ForceTrace:
    return trace_from_csv(Path(path).read_text(encoding="utf-8"), load_case, seed, direction, source=str(path))


def curve_to_csv(curve: FrictionCurve) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CURVE_HEADER)
    for s in curve.samples:
        writer.writerow((_num(s.load_force), _num(s.friction_magnitude), _num(s.sigma), curve.label))
    return buf.getvalue()


def curve_from_csv(text: str, source: str = "<curve>") -> FrictionCurve:
    reader = csv.reader(_io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != CURVE_HEADER:
        raise TraceFormatError(f"{source}: expected header {','.join(CURVE_HEADER)}")
    samples = []
    label = None
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 4:
            raise TraceFormatError(f"{source}:{lineno}: expected 4 fields, got {len(row)}")
        try:
            samples.append(FrictionSample(float(row[0]), float(row[1]), float(row[2])))
        except ValueError as exc:
            raise TraceFormatError(f"{source}:{lineno}: {exc}") from None
        if label is None:
            label = row[3]
    try:
        return FrictionCurve(tuple(samples), label or "")
    except ValueError as exc:
        raise TraceFormatError(f"{source}: {exc}") from None


def write_curve_csv(path, curve: FrictionCurve) -> Path:
    return atomic_write_text(path, curve_to_csv(curve))


def read_curve_csv(path) -> FrictionCurve:
    return curve_from_csv(Path(path).read_text(encoding="utf-8"), source=str(path))


def read_curves(paths: Iterable) -> list[FrictionCurve]:
    return [read_curve_csv(p) for p in paths]
