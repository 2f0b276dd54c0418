"""1-D interval sets: finite disjoint unions of closed intervals.

The result type of clipping a segment against a set expression. All
operations normalize to sorted disjoint intervals with positive length
(zero-length intervals are measure-irrelevant to occupation integrals and
are pruned).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = ["IntervalSet"]


def _normalize(
    raw: Iterable[tuple[float, float]], lo: float, hi: float
) -> tuple[tuple[float, float], ...]:
    clipped = []
    for a, b in raw:
        a, b = max(a, lo), min(b, hi)
        if b > a:
            clipped.append((a, b))
    clipped.sort()
    merged: list[tuple[float, float]] = []
    for a, b in clipped:
        if merged and a <= merged[-1][1]:
            if b > merged[-1][1]:
                merged[-1] = (merged[-1][0], b)
        else:
            merged.append((a, b))
    return tuple(merged)


@dataclass(frozen=True)
class IntervalSet:
    """Sorted disjoint closed intervals within a host interval."""

    intervals: tuple[tuple[float, float], ...]
    host: tuple[float, float] = (0.0, 1.0)

    @classmethod
    def of(
        cls,
        raw: Iterable[tuple[float, float]],
        host: tuple[float, float] = (0.0, 1.0),
    ) -> "IntervalSet":
        return cls(_normalize(raw, host[0], host[1]), host)

    @classmethod
    def empty(cls, host: tuple[float, float] = (0.0, 1.0)) -> "IntervalSet":
        return cls((), host)

    @classmethod
    def full(cls, host: tuple[float, float] = (0.0, 1.0)) -> "IntervalSet":
        return cls((host,), host)

    @property
    def measure(self) -> float:
        return sum(b - a for a, b in self.intervals)

    def is_empty(self) -> bool:
        return not self.intervals

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet.of(self.intervals + other.intervals, self.host)

    def intersection(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if hi > lo:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet(tuple(out), self.host)

    def complement(self) -> "IntervalSet":
        lo, hi = self.host
        out = []
        cursor = lo
        for a, b in self.intervals:
            if a > cursor:
                out.append((cursor, a))
            cursor = b
        if hi > cursor:
            out.append((cursor, hi))
        return IntervalSet(tuple(out), self.host)

    def restrict(self, lo: float, hi: float) -> "IntervalSet":
        """Intersection with [lo, hi], keeping the original host."""
        out = []
        for a, b in self.intervals:
            a2, b2 = max(a, lo), min(b, hi)
            if b2 > a2:
                out.append((a2, b2))
        return IntervalSet(tuple(out), self.host)

    def measure_below(self, t: float) -> float:
        """Measure of the part of the set at parameters <= t."""
        total = 0.0
        for a, b in self.intervals:
            if a >= t:
                break
            total += min(b, t) - a
        return total

    def reversed_params(self) -> "IntervalSet":
        """The set under t -> lo + hi - t (host endpoints swapped back)."""
        lo, hi = self.host
        flipped = [(lo + hi - b, lo + hi - a) for a, b in self.intervals]
        return IntervalSet.of(flipped, self.host)
