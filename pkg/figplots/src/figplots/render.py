"""Figure rendering. Output is deterministic: fixed backend, size,
fonts and colors, and no timestamp or tool metadata in the files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import PlotError, read_report, read_trajectory, report_vector
from .spec import PlotSpec

_RC = {
    "figure.figsize": (6.4, 4.0),
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.4,
}

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b",
           "#e377c2")


def _save(fig, out) -> None:
    out.parent.mkdir(parents=True, exist_ok=True)
    # strip the writer's Software tag so repeated runs are byte-identical
    fig.savefig(out, format="png", metadata={"Software": None})
    plt.close(fig)


def _marker_value(report, marker: str, column: str) -> float | None:
    """Equilibrium level for one plotted column, if the report has it."""
    prefix = column.rstrip("0123456789")
    idx = int(column[len(prefix):]) - 1 if column[len(prefix):] else 0
    key = {"x": marker, "u": marker}.get(prefix, f"cost_{marker}")
    if key not in report:
        return None
    vec = report_vector(report, key)
    if idx >= len(vec):
        return None
    return float(vec[idx])


def _timeseries(spec: PlotSpec):
    data = read_trajectory(spec.csv[0])
    missing = [c for c in spec.columns if c not in data]
    if missing:
        raise PlotError(f"{spec.csv[0]}: missing columns "
                        + ", ".join(missing))
    report = read_report(spec.report) if spec.report else {}
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        t = data["t"]
        for i, col in enumerate(spec.columns):
            ax.plot(t, data[col], color=_COLORS[i % len(_COLORS)],
                    label=col)
        for marker, style in (("ne", ":"), ("dne", "--")):
            if marker not in spec.markers:
                continue
            seen = set()
            for col in spec.columns:
                level = _marker_value(report, marker, col)
                if level is None or level in seen:
                    continue
                seen.add(level)
                ax.axhline(level, color="0.35", linestyle=style,
                           linewidth=1.0)
                ax.annotate(marker.upper(), xy=(t[-1], level),
                            xytext=(-2, 2), textcoords="offset points",
                            ha="right", fontsize=8, color="0.35")
        ax.set_xlabel(spec.xlabel or "t")
        ax.set_ylabel(spec.ylabel)
        ax.set_title(spec.title)
        ax.legend(loc="best")
        return fig


def _line_points(coeff: np.ndarray, xlim, ylim):
    """Endpoints of c1*x1 + c2*x2 + c0 = 0 clipped to the axis box."""
    c1, c2, c0 = coeff
    if abs(c2) > abs(c1):
        xs = np.array(xlim)
        return xs, -(c1 * xs + c0) / c2
    ys = np.array(ylim)
    return -(c2 * ys + c0) / c1, ys


def _reaction_curves(spec: PlotSpec):
    report = read_report(spec.report)
    t, d = spec.target, spec.deceiver
    base_key = f"rc_base_{t}"
    inject_key = f"rc_inject_{t}_{d}"
    if base_key not in report or inject_key not in report:
        raise PlotError(f"report lacks {base_key!r} or {inject_key!r}; "
                        "run the analysis with reaction curves enabled")
    base = report_vector(report, base_key)
    inject = report_vector(report, inject_key)
    if len(base) != 3:
        raise PlotError("reaction curve figures need a two-player game")
    ne = report_vector(report, "ne") if "ne" in report else None
    center_key = f"rc_center_{t}_{d}"
    center = (report_vector(report, center_key)
              if center_key in report else None)
    points = [p for p in (ne, center) if p is not None]
    if spec.xlim is not None:
        xlim = spec.xlim
    else:
        xs = [p[0] for p in points] or [0.0]
        span = max(1.0, max(xs) - min(xs))
        xlim = (min(xs) - span, max(xs) + span)
    if spec.ylim is not None:
        ylim = spec.ylim
    else:
        ys = [p[1] for p in points] or [0.0]
        span = max(1.0, max(ys) - min(ys))
        ylim = (min(ys) - span, max(ys) + span)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for i, delta in enumerate(spec.deltas):
            coeff = base + delta * inject
            x, y = _line_points(coeff, xlim, ylim)
            color = _COLORS[i % len(_COLORS)]
            ax.plot(x, y, color=color,
                    label=f"delta = {format(delta, '.6g')}")
        if center is not None:
            ax.plot(*center, marker="o", color="black", markersize=5,
                    linestyle="none", label="pivot")
        if ne is not None:
            ax.plot(*ne, marker="*", color="#d62728", markersize=9,
                    linestyle="none", label="NE")
        ax.set_xlim(*xlim)
        ax.set_ylim(*ylim)
        ax.set_xlabel(spec.xlabel or "x1")
        ax.set_ylabel(spec.ylabel or "x2")
        ax.set_title(spec.title)
        ax.legend(loc="best", fontsize=8)
        return fig


def _delta_compare(spec: PlotSpec):
    column = spec.columns[0]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for i, path in enumerate(spec.csv):
            data = read_trajectory(path)
            if column not in data:
                raise PlotError(f"{path}: missing column {column!r}")
            label = (spec.labels[i] if i < len(spec.labels)
                     else path.stem)
            ax.plot(data["t"], data[column],
                    color=_COLORS[i % len(_COLORS)], label=label)
        ax.set_xlabel(spec.xlabel or "t")
        ax.set_ylabel(spec.ylabel or column)
        ax.set_title(spec.title)
        ax.legend(loc="best")
        return fig


def render(spec: PlotSpec) -> None:
    """Render one figure to ``spec.out``."""
    if spec.kind == "timeseries":
        fig = _timeseries(spec)
    elif spec.kind == "reaction_curves":
        fig = _reaction_curves(spec)
    else:
        fig = _delta_compare(spec)
    _save(fig, spec.out)
