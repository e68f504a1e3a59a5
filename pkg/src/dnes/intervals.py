"""Finite unions of open real intervals, with infinite endpoints allowed."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class IntervalSet:
    """A sorted union of disjoint open intervals (lo, hi), lo < hi.

    Endpoints may be ``-inf`` / ``inf``.  Construction normalizes the
    input: intervals are sorted, overlapping or touching pieces merged,
    and empty pieces dropped.
    """

    intervals: tuple[tuple[float, float], ...] = field(default=())

    def __post_init__(self):
        pieces = sorted((float(lo), float(hi)) for lo, hi in self.intervals
                        if float(lo) < float(hi))
        merged: list[tuple[float, float]] = []
        for lo, hi in pieces:
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        object.__setattr__(self, "intervals", tuple(merged))

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @classmethod
    def open(cls, lo: float, hi: float) -> "IntervalSet":
        return cls(((lo, hi),))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def __contains__(self, x: float) -> bool:
        return any(lo < x < hi for lo, hi in self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for alo, ahi in self.intervals:
            for blo, bhi in other.intervals:
                lo, hi = max(alo, blo), min(ahi, bhi)
                if lo < hi:
                    out.append((lo, hi))
        return IntervalSet(tuple(out))

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.intervals + other.intervals)

    def measure(self) -> float:
        return sum(hi - lo for lo, hi in self.intervals)

    def __str__(self) -> str:
        if not self.intervals:
            return "{}"

        def fmt(v):
            if math.isinf(v):
                return "-inf" if v < 0 else "inf"
            return format(v, ".6g")

        return " u ".join(f"({fmt(lo)}, {fmt(hi)})" for lo, hi in self.intervals)

    @classmethod
    def parse(cls, text: str) -> "IntervalSet":
        """Inverse of ``str``; accepts e.g. ``"(-inf, 1.5) u (2, 3)"``."""
        text = text.strip()
        if text in ("{}", ""):
            return cls.empty()
        pieces = []
        for chunk in text.split(" u "):
            chunk = chunk.strip()
            if not (chunk.startswith("(") and chunk.endswith(")")):
                raise ValueError(f"bad interval syntax: {chunk!r}")
            lo_s, hi_s = chunk[1:-1].split(",")
            pieces.append((float(lo_s), float(hi_s)))
        return cls(tuple(pieces))
