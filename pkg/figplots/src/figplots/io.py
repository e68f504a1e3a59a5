"""Readers for the trajectory CSV and analysis report text formats.

Only the external text interfaces are consumed here; nothing is
re-derived from game data.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


class PlotError(ValueError):
    """Malformed plot spec or unusable input data."""


def read_trajectory(path: Path) -> dict[str, np.ndarray]:
    """Read a trajectory CSV into a column name -> array mapping.

    Raises
    ------
    PlotError
        If the file is missing, has no header, or holds no rows.
    """
    path = Path(path)
    if not path.is_file():
        raise PlotError(f"no such CSV file: {path}")
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        has_rows = bool(fh.readline().strip())
    if not header:
        raise PlotError(f"{path}: empty file")
    if not has_rows:
        raise PlotError(f"{path}: trajectory holds no samples")
    names = header.split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != len(names):
        raise PlotError(f"{path}: row width does not match header")
    return {name: data[:, i] for i, name in enumerate(names)}


def read_report(path: Path) -> dict[str, str]:
    """Read a ``key = value`` report into a string-valued mapping."""
    path = Path(path)
    if not path.is_file():
        raise PlotError(f"no such report file: {path}")
    out: dict[str, str] = {}
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise PlotError(f"{path}: bad report line {raw!r}")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def report_vector(report: dict[str, str], key: str) -> np.ndarray:
    if key not in report:
        raise PlotError(f"report lacks key {key!r}")
    return np.array([float(v) for v in report[key].split()])
