"""Plot spec files: flat ``key = value`` text describing one figure.

Relative paths inside a spec resolve against the directory that holds
the spec file, so figure batches can live next to their data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .io import PlotError

_KINDS = ("timeseries", "reaction_curves", "delta_compare")

_KEYS = {
    "timeseries": {"kind", "csv", "report", "columns", "markers", "out",
                   "title", "xlabel", "ylabel"},
    "reaction_curves": {"kind", "report", "target", "deceiver", "deltas",
                        "xlim", "ylim", "out", "title", "xlabel", "ylabel"},
    "delta_compare": {"kind", "csv", "labels", "column", "out", "title",
                      "xlabel", "ylabel"},
}


@dataclass
class PlotSpec:
    """One figure: input files, figure kind and axis decoration."""

    kind: str
    out: Path
    csv: list[Path] = field(default_factory=list)
    report: Path | None = None
    columns: list[str] = field(default_factory=list)
    markers: list[str] = field(default_factory=list)
    labels: list[str] = field(default_factory=list)
    target: int = 0
    deceiver: int = 0
    deltas: list[float] = field(default_factory=list)
    xlim: tuple[float, float] | None = None
    ylim: tuple[float, float] | None = None
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""


def _pairs(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise PlotError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key in out:
            raise PlotError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def parse_plotspec(text: str, base: Path | None = None) -> PlotSpec:
    """Parse spec text; resolve relative paths against ``base``."""
    base = Path(".") if base is None else Path(base)
    data = _pairs(text)
    kind = data.get("kind")
    if kind not in _KINDS:
        raise PlotError(f"kind must be one of {', '.join(_KINDS)}; "
                        f"got {kind!r}")
    for key in data:
        if key not in _KEYS[kind]:
            raise PlotError(f"unknown key {key!r} for kind {kind!r}")
    if "out" not in data:
        raise PlotError("missing 'out'")

    def path(v: str) -> Path:
        p = Path(v)
        return p if p.is_absolute() else base / p

    spec = PlotSpec(kind=kind, out=path(data["out"]),
                    title=data.get("title", ""),
                    xlabel=data.get("xlabel", ""),
                    ylabel=data.get("ylabel", ""))
    if "csv" in data:
        spec.csv = [path(v) for v in data["csv"].split()]
    if "report" in data:
        spec.report = path(data["report"])
    if "labels" in data:
        spec.labels = [v.strip() for v in data["labels"].split(",")]

    if kind == "timeseries":
        if not spec.csv or "columns" not in data:
            raise PlotError("timeseries needs 'csv' and 'columns'")
        spec.columns = data["columns"].split()
        spec.markers = data.get("markers", "").split()
    elif kind == "reaction_curves":
        if spec.report is None:
            raise PlotError("reaction_curves needs 'report'")
        for key in ("target", "deceiver", "deltas"):
            if key not in data:
                raise PlotError(f"reaction_curves needs {key!r}")
        spec.target = int(data["target"])
        spec.deceiver = int(data["deceiver"])
        spec.deltas = [float(v) for v in data["deltas"].split()]
        for key in ("xlim", "ylim"):
            if key in data:
                lo, hi = (float(v) for v in data[key].split())
                setattr(spec, key, (lo, hi))
    else:
        if not spec.csv or "column" not in data:
            raise PlotError("delta_compare needs 'csv' and 'column'")
        spec.columns = [data["column"]]
        if spec.labels and len(spec.labels) != len(spec.csv):
            raise PlotError("labels must match the number of CSV files")
    return spec
