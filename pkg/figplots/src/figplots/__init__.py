"""Deterministic batch figures from dnes CSV traces and reports."""

from .io import PlotError, read_report, read_trajectory
from .spec import PlotSpec, parse_plotspec
from .render import render

__all__ = ["PlotError", "PlotSpec", "parse_plotspec", "read_report",
           "read_trajectory", "render"]
__version__ = "1.0.0"
