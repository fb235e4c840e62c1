"""
Trace input and point/table output.

Trace CSV
    Header ``theta_deg,r`` or ``theta_rad,r`` (exactly one angle column;
    extra columns are ignored), one sample per line, LF or CRLF.
Trace JSON
    Array of objects with numeric ``theta_rad`` and ``r``.

Numbers in point files carry 12 significant digits; growth-table values
carry 9 decimals.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os

import numpy as np

from .core import GrowthTableRow, SpiralSpec, radius_at_index
from .fitting import FitResult, PolarSample

__all__ = ["TraceFormatError", "read_trace", "write_points", "write_growth_table"]

FORMATS = ("csv", "json")


class TraceFormatError(ValueError):
    """Malformed trace input. ``line`` is 1-based (CSV) or the array index (JSON)."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _read_text(source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
    elif isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    else:
        data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8-sig")
    return data


def _sink_write(sink, text):
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    elif isinstance(sink, io.TextIOBase):
        sink.write(text)
    else:
        sink.write(text.encode("utf-8"))


def _check_format(fmt):
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")


def _number(value, what, line):
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise TraceFormatError(f"{what} is not a number: {value!r}", line) from None
    if isinstance(value, bool) or not math.isfinite(x):
        raise TraceFormatError(f"{what} must be finite, got {value!r}", line)
    return x


def _parse_csv(text):
    lines = text.splitlines()
    rows = [(i + 1, ln) for i, ln in enumerate(lines) if ln.strip()]
    if not rows:
        raise TraceFormatError("empty trace")
    hline, header = rows[0]
    cols = [c.strip() for c in next(csv.reader([header]))]
    angle_cols = [c for c in cols if c in ("theta_deg", "theta_rad")]
    if len(angle_cols) != 1 or "r" not in cols:
        raise TraceFormatError(
            "header must contain exactly one of theta_deg/theta_rad and an r column", hline
        )
    ia, ir = cols.index(angle_cols[0]), cols.index("r")
    degrees = angle_cols[0] == "theta_deg"
    out = []
    for lineno, ln in rows[1:]:
        fields = next(csv.reader([ln]))
        if len(fields) != len(cols):
            raise TraceFormatError(f"expected {len(cols)} fields, got {len(fields)}", lineno)
        t = _number(fields[ia].strip(), "theta", lineno)
        r = _number(fields[ir].strip(), "r", lineno)
        if r <= 0:
            raise TraceFormatError(f"radius must be positive, got {r}", lineno)
        out.append((math.radians(t) if degrees else t, r))
    return out


def _parse_json(text):
    try:
        data = json.loads(text) if text.strip() else []
    except json.JSONDecodeError as exc:
        raise TraceFormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(data, list):
        raise TraceFormatError("trace JSON must be an array of objects")
    out = []
    for i, item in enumerate(data):
        if not isinstance(item, dict) or "theta_rad" not in item or "r" not in item:
            raise TraceFormatError("expected an object with theta_rad and r", i)
        t = _number(item["theta_rad"], "theta_rad", i)
        r = _number(item["r"], "r", i)
        if r <= 0:
            raise TraceFormatError(f"radius must be positive, got {r}", i)
        out.append((t, r))
    return out


def read_trace(source, format="csv") -> list[PolarSample]:
    """Read a digitized trace.

    ``source`` is a path, a bytes object, or a binary or text stream.
    Angles are returned in radians. If the angles are not already
    increasing they are unwrapped (steps of less than half a turn assumed).

    Raises
    ------
    TraceFormatError
        Empty input, malformed rows, non-positive radii, or angles that are
        still not strictly increasing after unwrapping.
    """
    _check_format(format)
    text = _read_text(source)
    pairs = _parse_csv(text) if format == "csv" else _parse_json(text)
    if not pairs:
        raise TraceFormatError("empty trace")
    theta = np.array([p[0] for p in pairs])
    if np.any(np.diff(theta) <= 0):
        theta = np.unwrap(theta)
        if np.any(np.diff(theta) <= 0):
            bad = int(np.argmax(np.diff(theta) <= 0)) + 1
            raise TraceFormatError(f"theta is not monotone after unwrapping (sample {bad})")
    return [PolarSample(float(t), p[1]) for t, p in zip(theta, pairs)]


def _g12(x):
    return f"{x:.12g}"


def _point_table(obj, count):
    if isinstance(obj, FitResult):
        cols = ("theta_rad", "r", "model_r", "residual")
        data = zip(obj.theta, obj.r, obj.model_r, obj.residuals)
    elif isinstance(obj, SpiralSpec):
        if count is None:
            count = obj.mod + 1
        if count < 1:
            raise ValueError("count must be >= 1")
        cols = ("theta_rad", "r")
        data = ((obj.phase + n * obj.phi0, radius_at_index(obj, n)) for n in range(count))
    else:
        raise TypeError(f"expected SpiralSpec or FitResult, got {type(obj).__name__}")
    return cols, [tuple(float(v) for v in row) for row in data]


def write_points(obj, format="csv", sink=None, count=None):
    """Write spiral vertices or a fit's residual table.

    For a :class:`SpiralSpec` the first ``count`` vertices are written as
    ``theta_rad, r`` with ``theta`` measured in the spiral's winding sense
    (default: one full turn, ``mod + 1`` rows). For a :class:`FitResult` one
    row per sample is written as ``theta_rad, r, model_r, residual``.
    Returns the text when ``sink`` is None.
    """
    _check_format(format)
    cols, rows = _point_table(obj, count)
    if format == "csv":
        lines = [",".join(cols)] + [",".join(_g12(v) for v in row) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(
            [{c: float(_g12(v)) for c, v in zip(cols, row)} for row in rows], indent=1
        ) + "\n"
    if sink is None:
        return text
    _sink_write(sink, text)


def write_growth_table(rows, format="csv", sink=None):
    """Write ``sides, degrees, base`` rows with 9 decimals; returns text when ``sink`` is None."""
    _check_format(format)
    rows = [GrowthTableRow(*r) for r in rows]
    if not rows:
        raise ValueError("growth table has no rows")
    if format == "csv":
        lines = ["sides,degrees,base"] + [
            f"{r.sides},{r.degrees:.9f},{r.base:.9f}" for r in rows
        ]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(
            [
                {"sides": r.sides, "degrees": round(r.degrees, 9), "base": round(r.base, 9)}
                for r in rows
            ],
            indent=1,
        ) + "\n"
    if sink is None:
        return text
    _sink_write(sink, text)
