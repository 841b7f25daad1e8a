"""Intervals on the real line with explicit open/closed bounds.

Better-response sets and median intervals need exact boundary semantics:
whether an endpoint is attainable is decided by tie-breaking, not by
tolerance, so bounds carry explicit flags instead of epsilons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INF = math.inf


@dataclass(frozen=True)
class Interval:
    """A nonempty interval. Infinite endpoints are always open."""

    lo: float
    hi: float
    lo_open: bool = True
    hi_open: bool = True

    def __post_init__(self):
        if math.isinf(self.lo) and not self.lo_open:
            object.__setattr__(self, "lo_open", True)
        if math.isinf(self.hi) and not self.hi_open:
            object.__setattr__(self, "hi_open", True)
        if not self.is_valid():
            raise ValueError(f"empty or inverted interval: {self}")

    @staticmethod
    def point(x: float) -> "Interval":
        return Interval(x, x, False, False)

    @staticmethod
    def closed(lo: float, hi: float) -> "Interval":
        return Interval(lo, hi, False, False)

    @staticmethod
    def open(lo: float, hi: float) -> "Interval":
        return Interval(lo, hi, True, True)

    def is_valid(self) -> bool:
        if self.lo < self.hi:
            return True
        return self.lo == self.hi and not self.lo_open and not self.hi_open

    def contains(self, x: float) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and self.lo_open:
            return False
        if x == self.hi and self.hi_open:
            return False
        return True

    def intersect(self, other: "Interval") -> "Interval | None":
        """Intersection, or None when empty."""
        if self.lo > other.lo or (self.lo == other.lo and self.lo_open):
            lo, lo_open = self.lo, self.lo_open
        else:
            lo, lo_open = other.lo, other.lo_open
        if self.hi < other.hi or (self.hi == other.hi and self.hi_open):
            hi, hi_open = self.hi, self.hi_open
        else:
            hi, hi_open = other.hi, other.hi_open
        if lo > hi:
            return None
        if lo == hi and (lo_open or hi_open):
            return None
        return Interval(lo, hi, lo_open, hi_open)

    def is_finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def width(self) -> float:
        return self.hi - self.lo

    def grid_points(self, step: float, limit: int = 1_000_000) -> list[float]:
        """All multiples of ``step`` inside the interval (finite intervals)."""
        if not self.is_finite():
            raise ValueError("grid_points requires a finite interval")
        k_lo = math.ceil(self.lo / step - 1e-9)
        if self.lo_open and abs(k_lo * step - self.lo) <= 1e-9 * max(1.0, abs(self.lo)):
            k_lo += 1
        k_hi = math.floor(self.hi / step + 1e-9)
        if self.hi_open and abs(k_hi * step - self.hi) <= 1e-9 * max(1.0, abs(self.hi)):
            k_hi -= 1
        if k_hi - k_lo + 1 > limit:
            raise ValueError("grid budget exceeded")
        return [k * step for k in range(k_lo, k_hi + 1)]

    def has_grid_point(self, step: float) -> bool:
        if math.isinf(self.lo) or math.isinf(self.hi):
            return True  # a half-line always contains grid points
        return bool(self.grid_points(step))

    def __str__(self) -> str:
        lb = "(" if self.lo_open else "["
        rb = ")" if self.hi_open else "]"
        return f"{lb}{self.lo}, {self.hi}{rb}"


def _touch(a: Interval, b: Interval) -> bool:
    """True when a ∪ b is a single interval (a sorted before b)."""
    if b.lo < a.hi:
        return True
    if b.lo == a.hi:
        return not (a.hi_open and b.lo_open)
    return False


class IntervalSet:
    """A normalized union of disjoint, sorted intervals."""

    def __init__(self, intervals: list[Interval] | None = None):
        self.intervals: list[Interval] = []
        if intervals:
            for iv in sorted(intervals, key=lambda i: (i.lo, i.lo_open)):
                self._push(iv)

    def _push(self, iv: Interval) -> None:
        if self.intervals and _touch(self.intervals[-1], iv):
            last = self.intervals[-1]
            if iv.hi > last.hi or (iv.hi == last.hi and not iv.hi_open):
                hi, hi_open = iv.hi, iv.hi_open
            else:
                hi, hi_open = last.hi, last.hi_open
            self.intervals[-1] = Interval(last.lo, hi, last.lo_open, hi_open)
        else:
            self.intervals.append(iv)

    @staticmethod
    def empty() -> "IntervalSet":
        return IntervalSet()

    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, x: float) -> bool:
        return any(iv.contains(x) for iv in self.intervals)

    def intersect_interval(self, other: Interval) -> "IntervalSet":
        out = []
        for iv in self.intervals:
            hit = iv.intersect(other)
            if hit is not None:
                out.append(hit)
        return IntervalSet(out)

    def has_grid_point(self, step: float) -> bool:
        return any(iv.has_grid_point(step) for iv in self.intervals)

    def grid_points(self, step: float, limit: int = 1_000_000) -> list[float]:
        pts: list[float] = []
        for iv in self.intervals:
            pts.extend(iv.grid_points(step, limit=limit))
        return pts

    def sample_points(self) -> list[float]:
        """Finite representatives: midpoints plus near-boundary probes."""
        pts: list[float] = []
        for iv in self.intervals:
            lo, hi = iv.lo, iv.hi
            if math.isinf(lo) and math.isinf(hi):
                pts.append(0.0)
                continue
            if math.isinf(lo):
                pts.append(hi - 1.0 if iv.hi_open else hi)
                continue
            if math.isinf(hi):
                pts.append(lo + 1.0 if iv.lo_open else lo)
                continue
            pts.append((lo + hi) / 2.0)
            if not iv.lo_open:
                pts.append(lo)
            if not iv.hi_open:
                pts.append(hi)
        return pts

    def __eq__(self, other) -> bool:
        return isinstance(other, IntervalSet) and self.intervals == other.intervals

    def __repr__(self) -> str:
        if not self.intervals:
            return "IntervalSet(∅)"
        return "IntervalSet(" + " ∪ ".join(str(iv) for iv in self.intervals) + ")"
