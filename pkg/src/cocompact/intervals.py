"""Closed intervals and finite unions of closed intervals with rational endpoints.

Unbounded ends are encoded with ``float('inf')`` / ``float('-inf')``; every
finite endpoint is a :class:`fractions.Fraction`.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

Number = Union[Fraction, float]

INF = math.inf
NEG_INF = -math.inf

_RATIONAL_RE = re.compile(r"^-?(0|[1-9][0-9]*)(/[1-9][0-9]*)?$")


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and rational strings to Fraction (floats are exact)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, float)):
        if isinstance(value, float) and not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value, strict=False)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def parse_rational(text: str, strict: bool = True) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``.

    With ``strict`` the text must already be in lowest terms with a positive
    denominator other than 1, and ``-0`` is rejected.
    """
    text = text.strip()
    if strict:
        if not _RATIONAL_RE.match(text) or text == "-0":
            raise ValueError(f"not a canonical rational: {text!r}")
        if "/" in text:
            num, den = (int(part) for part in text.split("/"))
            if den == 1 or math.gcd(num, den) != 1:
                raise ValueError(f"not a canonical rational: {text!r}")
    return Fraction(text)


def format_rational(q: Number) -> str:
    if isinstance(q, float):
        if q == INF:
            return "inf"
        if q == NEG_INF:
            return "-inf"
        q = Fraction(q)
    return str(q)


def is_finite(x: Number) -> bool:
    return not (isinstance(x, float) and math.isinf(x))


@dataclass(frozen=True, order=True)
class Interval:
    """Closed interval ``[lo, hi]``; ``lo`` may be -inf and ``hi`` may be +inf."""

    lo: Number
    hi: Number

    def __post_init__(self) -> None:
        lo, hi = self.lo, self.hi
        if not isinstance(lo, float) or is_finite(lo):
            object.__setattr__(self, "lo", as_fraction(lo))
        if not isinstance(hi, float) or is_finite(hi):
            object.__setattr__(self, "hi", as_fraction(hi))
        if self.lo == INF or self.hi == NEG_INF:
            raise ValueError(f"invalid interval [{lo}, {hi}]")
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")

    @property
    def bounded(self) -> bool:
        return is_finite(self.lo) and is_finite(self.hi)

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Number:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersection(self, other: "Interval") -> "Interval | None":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval(lo, hi)

    def to_json(self) -> list[str]:
        return [format_rational(self.lo), format_rational(self.hi)]

    def __str__(self) -> str:
        return f"[{format_rational(self.lo)}, {format_rational(self.hi)}]"


def parse_endpoint(text: str, strict: bool = True) -> Number:
    if text in ("inf", "+inf"):
        return INF
    if text == "-inf":
        return NEG_INF
    return parse_rational(text, strict=strict)


class IntervalUnion:
    """Canonical finite union of closed intervals: sorted, pairwise disjoint, not touching."""

    __slots__ = ("intervals", "_hash")

    def __init__(self, intervals: Iterable[Interval] = ()) -> None:
        self.intervals: tuple[Interval, ...] = _canonical(intervals)
        self._hash = hash(self.intervals)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence]) -> "IntervalUnion":
        return cls(Interval(a, b) for a, b in pairs)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return self.intervals == other.intervals

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "IntervalUnion") -> bool:
        return self.intervals < other.intervals

    def __repr__(self) -> str:
        return f"IntervalUnion({' ∪ '.join(map(str, self.intervals)) or '∅'})"

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def bounded(self) -> bool:
        return all(iv.bounded for iv in self.intervals)

    def hull(self) -> Interval | None:
        if not self.intervals:
            return None
        return Interval(self.intervals[0].lo, self.intervals[-1].hi)

    def __contains__(self, x) -> bool:
        return any(x in iv for iv in self.intervals)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion(self.intervals + other.intervals)

    def intersection(self, other: "IntervalUnion") -> "IntervalUnion":
        out = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            piece = a[i].intersection(b[j])
            if piece is not None:
                out.append(piece)
            if a[i].hi < b[j].hi:
                i += 1
            else:
                j += 1
        return IntervalUnion(out)

    def issubset(self, other: "IntervalUnion") -> bool:
        return all(any(o.contains_interval(iv) for o in other.intervals) for iv in self.intervals)

    def endpoints(self) -> list[Number]:
        pts = []
        for iv in self.intervals:
            pts.append(iv.lo)
            pts.append(iv.hi)
        return pts

    def to_json(self) -> list[list[str]]:
        return [iv.to_json() for iv in self.intervals]


def _canonical(intervals: Iterable[Interval]) -> tuple[Interval, ...]:
    items = sorted(intervals, key=lambda iv: (iv.lo, iv.hi))
    merged: list[Interval] = []
    for iv in items:
        if merged and iv.lo <= merged[-1].hi:
            last = merged[-1]
            if iv.hi > last.hi:
                merged[-1] = Interval(last.lo, iv.hi)
        else:
            merged.append(iv)
    return tuple(merged)


def pairwise_disjoint(intervals: Sequence[Interval]) -> bool:
    ordered = sorted(intervals)
    return all(a.hi < b.lo for a, b in zip(ordered, ordered[1:]))
