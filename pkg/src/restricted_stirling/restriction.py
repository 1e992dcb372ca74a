"""Restriction sets R of positive integers and their stretched images R(d).

A restriction set is stored as its decomposition into maximal intervals,
the last of which may be unbounded.  The text form is a comma separated
list of items ``7``, ``2-5`` or ``4-`` (everything from 4 on).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

Interval = Tuple[int, Optional[int]]  # hi is None for an unbounded tail

_ITEM = re.compile(r"^\s*(\d+)\s*(?:(-)\s*(\d+)?)?\s*$")


class RestrictionError(ValueError):
    pass


def stretch_value(n: int, d: int) -> int:
    """s_d(n) = d(n-1) + 1."""
    return d * (n - 1) + 1


def unstretch_value(m: int, d: int) -> Optional[int]:
    """Return n with s_d(n) = m, or None when m is off the progression."""
    if m < 1 or (m - 1) % d:
        return None
    return (m - 1) // d + 1


@dataclass(frozen=True)
class RestrictionSet:
    intervals: Tuple[Interval, ...]

    def __post_init__(self):
        if not self.intervals:
            raise RestrictionError("restriction set is empty")
        prev_hi = None
        for i, (lo, hi) in enumerate(self.intervals):
            if lo < 1 or (hi is not None and hi < lo):
                raise RestrictionError(f"bad interval [{lo}, {hi}]")
            if hi is None and i != len(self.intervals) - 1:
                raise RestrictionError("only the last interval may be unbounded")
            if prev_hi is not None and lo < prev_hi + 2:
                raise RestrictionError("intervals are not maximal")
            prev_hi = hi

    @classmethod
    def from_intervals(cls, intervals) -> "RestrictionSet":
        """Canonicalize arbitrary (possibly overlapping) intervals."""
        items = sorted(intervals, key=lambda iv: iv[0])
        merged: list = []
        for lo, hi in items:
            if hi is not None and hi < lo:
                raise RestrictionError(f"interval {lo}-{hi} has lo > hi")
            if lo < 1:
                raise RestrictionError("elements must be positive integers")
            if merged:
                plo, phi = merged[-1]
                if phi is None or lo <= phi + 1:
                    if phi is not None:
                        merged[-1] = (plo, None if hi is None else max(phi, hi))
                    continue
            merged.append((lo, hi))
        return cls(tuple(merged))

    @classmethod
    def from_elements(cls, elements) -> "RestrictionSet":
        return cls.from_intervals((e, e) for e in elements)

    @classmethod
    def naturals(cls) -> "RestrictionSet":
        return cls(((1, None),))

    @classmethod
    def initial(cls, r: int) -> "RestrictionSet":
        """The set [r] = {1, ..., r}."""
        return cls(((1, r),))

    def __contains__(self, n) -> bool:
        for lo, hi in self.intervals:
            if n < lo:
                return False
            if hi is None or n <= hi:
                return True
        return False

    @property
    def is_finite(self) -> bool:
        return self.intervals[-1][1] is not None

    @property
    def max_element(self) -> Optional[int]:
        return self.intervals[-1][1]

    def elements(self, upto: int) -> Iterator[int]:
        """Elements of R not exceeding ``upto``, ascending."""
        for lo, hi in self.intervals:
            top = upto if hi is None else min(hi, upto)
            yield from range(lo, top + 1)

    def __str__(self) -> str:
        return format_restriction(self)


def parse_restriction(text: str) -> RestrictionSet:
    """Parse ``"1,2,4-6"``, ``"1-"`` and the like into canonical form."""
    if not text or not text.strip():
        raise RestrictionError("empty restriction")
    intervals = []
    for item in text.split(","):
        m = _ITEM.match(item)
        if m is None:
            raise RestrictionError(f"cannot parse restriction item {item!r}")
        lo = int(m.group(1))
        if lo < 1:
            raise RestrictionError("elements must be >= 1")
        if m.group(2) is None:
            hi: Optional[int] = lo
        elif m.group(3) is None:
            hi = None
        else:
            hi = int(m.group(3))
            if hi < lo:
                raise RestrictionError(f"interval {lo}-{hi} has lo > hi")
        intervals.append((lo, hi))
    return RestrictionSet.from_intervals(intervals)


def format_restriction(R: RestrictionSet) -> str:
    parts = []
    for lo, hi in R.intervals:
        if hi is None:
            parts.append(f"{lo}-")
        elif hi == lo:
            parts.append(str(lo))
        else:
            parts.append(f"{lo}-{hi}")
    return ",".join(parts)


def has_no_exposed_odds(R: RestrictionSet) -> bool:
    if 1 in R and 2 not in R:
        return False
    for lo, hi in R.intervals:
        # an odd n >= 3 inside an interval has n+-1 in R unless it sits at an end
        for end in (lo, hi):
            if end is not None and end >= 3 and end % 2 == 1:
                return False
    return True


@dataclass(frozen=True)
class EndpointSets:
    a_set: frozenset
    b_set: frozenset


def endpoints(R: RestrictionSet) -> EndpointSets:
    a = frozenset(lo for lo, _ in R.intervals if lo != 1)
    b = frozenset(hi for _, hi in R.intervals if hi is not None)
    return EndpointSets(a, b)


@dataclass(frozen=True)
class StretchedSet:
    """Membership view of R(d) = {d(n-1)+1 : n in R}."""

    base: RestrictionSet
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise RestrictionError("stretch factor must be >= 1")

    def preimage(self, m: int) -> Optional[int]:
        n = unstretch_value(m, self.d)
        if n is None or n not in self.base:
            return None
        return n

    def __contains__(self, m) -> bool:
        return self.preimage(m) is not None

    def elements(self, upto: int) -> Iterator[int]:
        for n in self.base.elements(unstretch_value_floor(upto, self.d)):
            yield stretch_value(n, self.d)


def unstretch_value_floor(m: int, d: int) -> int:
    """Largest n with s_d(n) <= m (0 if none)."""
    if m < 1:
        return 0
    return (m - 1) // d + 1


def stretch(R: RestrictionSet, d: int) -> StretchedSet:
    return StretchedSet(R, d)
