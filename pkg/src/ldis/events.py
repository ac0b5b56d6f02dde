"""Finite unions of closed intervals on the extended real line."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import DomainError

Interval = tuple[float, float]


def _normalize(intervals) -> tuple[Interval, ...]:
    ivs = []
    for lo, hi in intervals:
        lo, hi = float(lo), float(hi)
        if math.isnan(lo) or math.isnan(hi) or not lo <= hi:
            raise DomainError(f"bad interval [{lo}, {hi}]")
        ivs.append((lo, hi))
    ivs.sort()
    merged: list[Interval] = []
    for lo, hi in ivs:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return tuple(merged)


@dataclass(frozen=True)
class EventSet:
    """A = union of closed intervals [lo, hi], kept sorted and disjoint."""

    intervals: tuple[Interval, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "intervals", _normalize(self.intervals))

    @classmethod
    def above(cls, b: float) -> "EventSet":
        return cls(((b, math.inf),))

    @classmethod
    def below(cls, b: float) -> "EventSet":
        return cls(((-math.inf, b),))

    @classmethod
    def two_sided(cls, a: float, b: float) -> "EventSet":
        """{x >= a} union {x <= -b}."""
        return cls(((-math.inf, -b), (a, math.inf)))

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, x: float) -> bool:
        return any(lo <= x <= hi for lo, hi in self.intervals)

    def intersect(self, other: "EventSet") -> "EventSet":
        out = []
        for a, b in self.intervals:
            for c, d in other.intervals:
                lo, hi = max(a, c), min(b, d)
                if lo <= hi:
                    out.append((lo, hi))
        return EventSet(tuple(out))

    def union(self, other: "EventSet") -> "EventSet":
        return EventSet(self.intervals + other.intervals)

    def bounds(self) -> Interval:
        return self.intervals[0][0], self.intervals[-1][1]

    def to_text(self) -> str:
        return "; ".join(f"[{_fmt(lo)}, {_fmt(hi)}]" for lo, hi in self.intervals)

    @classmethod
    def from_text(cls, text: str) -> "EventSet":
        """Parse "[0.8, inf]; [-inf, -1.2]"."""
        parts = [p.strip() for p in text.split(";") if p.strip()]
        ivs = []
        for part in parts:
            m = re.fullmatch(r"\[\s*([^,\s]+)\s*,\s*([^\]\s]+)\s*\]", part)
            if not m:
                raise DomainError(f"cannot parse interval {part!r}")
            ivs.append((float(m.group(1)), float(m.group(2))))
        return cls(tuple(ivs))


def _fmt(v: float) -> str:
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(float(v))
