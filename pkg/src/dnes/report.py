"""Flat key/value report serialization shared by the analysis commands.

A report is an ordered mapping of string keys to scalars, vectors,
interval sets or strings, rendered as ``key = value`` lines.  Vector
values are space-separated; interval sets use their standard string
form.  Lines starting with ``#`` and blank lines are ignored on read.
"""

from __future__ import annotations

import numpy as np

from .intervals import IntervalSet


def _fmt(value) -> str:
    if isinstance(value, IntervalSet):
        return str(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".10g")
    if isinstance(value, (list, tuple, np.ndarray)):
        arr = np.asarray(value)
        if arr.ndim == 2:
            return "; ".join(" ".join(format(float(v), ".10g") for v in row)
                             for row in arr)
        return " ".join(format(float(v), ".10g") for v in arr)
    return str(value)


def render_report(items: dict) -> str:
    """Render an ordered mapping as ``key = value`` text."""
    lines = []
    for key, value in items.items():
        if value is None:
            continue
        lines.append(f"{key} = {_fmt(value)}")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> dict[str, str]:
    """Read back a rendered report as a string-valued mapping."""
    out: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"bad report line: {raw!r}")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def report_vector(report: dict[str, str], key: str) -> np.ndarray:
    return np.array([float(v) for v in report[key].split()])


def report_float(report: dict[str, str], key: str) -> float:
    return float(report[key])


def report_intervals(report: dict[str, str], key: str) -> IntervalSet:
    return IntervalSet.parse(report[key])
