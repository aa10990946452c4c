"""Compactifications of the line: the (0, 1) conjugation, its endpoint extension,
the circle chord metric on the one-point compactification, and co-compact
covers built from balls of that metric.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import CocompactError, NonDivergent, NotACover, NotPerfect
from .intervals import INF, NEG_INF, Interval, IntervalUnion, as_fraction, is_finite
from .plmap import EndClass, PLMap, classify_ends, evaluate, is_perfect
from .covers import CoCompactCover, CoCompactSet

X_INF = INF  # the point at infinity; -inf is accepted as the same point


class EndpointBehavior(enum.Enum):
    A1 = "A1"  # g -> 0 at both ends
    A2 = "A2"  # g -> 1 at both ends
    A3 = "A3"  # g(0) = 0, g(1) = 1
    A4 = "A4"  # g(0) = 1, g(1) = 0
    NON_DIVERGENT = "NonDivergent"


_A_OF_C = {
    EndClass.C1: EndpointBehavior.A1,
    EndClass.C2: EndpointBehavior.A2,
    EndClass.C3: EndpointBehavior.A3,
    EndClass.C4: EndpointBehavior.A4,
    EndClass.NON_DIVERGENT: EndpointBehavior.NON_DIVERGENT,
}

_ENDPOINT_VALUES = {
    EndpointBehavior.A1: (0.0, 0.0),
    EndpointBehavior.A2: (1.0, 1.0),
    EndpointBehavior.A3: (0.0, 1.0),
    EndpointBehavior.A4: (1.0, 0.0),
}


def h(x) -> float:
    """Homeomorphism R -> (0, 1), x -> arctan(x)/pi + 1/2."""
    return math.atan(float(x)) / math.pi + 0.5


def h_inv(t: float) -> float:
    return math.tan(math.pi * (t - 0.5))


def classify_endpoints(f: PLMap) -> EndpointBehavior:
    return _A_OF_C[classify_ends(f)]


@dataclass(frozen=True)
class UnitIntervalMap:
    """``g = h o f o h^{-1}`` on (0, 1); ``g0``/``g1`` are set once extended to [0, 1]."""

    source: PLMap
    behavior: EndpointBehavior
    g0: Optional[float] = None
    g1: Optional[float] = None

    @property
    def extended(self) -> bool:
        return self.g0 is not None

    def __call__(self, t: float) -> float:
        if t == 0 or t == 1:
            if not self.extended:
                raise ValueError("g is only defined on (0, 1) until extended")
            return self.g0 if t == 0 else self.g1
        if not 0 < t < 1:
            raise ValueError(f"{t} is outside [0, 1]")
        x = Fraction(h_inv(t))
        return h(evaluate(self.source, x))

    def semiconjugacy_error(self, x) -> float:
        """``|h(f(x)) - g(h(x))|`` with ``f`` evaluated exactly."""
        return abs(h(evaluate(self.source, as_fraction(x))) - self(h(x)))


def conjugate(f: PLMap) -> UnitIntervalMap:
    if not is_perfect(f):
        raise NotPerfect("conjugation to (0, 1) needs a perfect map")
    return UnitIntervalMap(f, classify_endpoints(f))


def extend(g: UnitIntervalMap) -> UnitIntervalMap:
    """Fill in ``g(0)`` and ``g(1)``; {0, 1} is then preimage-invariant."""
    if g.behavior is EndpointBehavior.NON_DIVERGENT:
        raise NonDivergent("f has a non-divergent end; g does not extend to {0, 1}")
    if not is_perfect(g.source):
        raise NotPerfect("extension needs a perfect map")
    g0, g1 = _ENDPOINT_VALUES[g.behavior]
    return UnitIntervalMap(g.source, g.behavior, g0, g1)


def one_point_extension(f: PLMap):
    """``f~`` on R ∪ {x_inf}: f on R and x_inf -> x_inf."""
    if not is_perfect(f):
        raise NotPerfect("the one-point extension is continuous only for perfect maps")

    def f_tilde(x):
        if not is_finite(x):
            return X_INF
        return evaluate(f, x)

    return f_tilde


# ---------------------------------------------------------------------------
# circle chord metric


class CompactTypeMetric:
    """Chord distance between the points at angle 2*arctan(x) on the unit circle.

    Closed form: ``d(x, y) = 2|x - y| / sqrt((1 + x^2)(1 + y^2))`` and
    ``d(x, x_inf) = 2 / sqrt(1 + x^2)``; the point at infinity sits at angle pi.
    """

    name = "circle"

    @staticmethod
    def angle(x) -> float:
        if not is_finite(x):
            return math.pi
        return 2.0 * math.atan(float(x))

    def squared(self, x, y) -> Fraction:
        """Exact squared distance for rational (or infinite) arguments."""
        xf, yf = is_finite(x), is_finite(y)
        if not xf and not yf:
            return Fraction(0)
        if not xf:
            x, y = y, x
        x = as_fraction(x)
        if not (xf and yf):
            return Fraction(4) / (1 + x * x)
        y = as_fraction(y)
        return 4 * (x - y) ** 2 / ((1 + x * x) * (1 + y * y))

    def __call__(self, x, y) -> float:
        xf, yf = is_finite(x), is_finite(y)
        if not xf and not yf:
            return 0.0
        if not xf:
            x, y = y, x
        x = float(x)
        if not (xf and yf):
            return 2.0 / math.sqrt(1.0 + x * x)
        y = float(y)
        return 2.0 * abs(math.sin(math.atan(x) - math.atan(y)))


def metric_eval(m: CompactTypeMetric, x, y) -> float:
    return m(x, y)


def _sqrt_bounds(q: Fraction, bits: int = 48) -> tuple[Fraction, Fraction]:
    """Rationals lo <= sqrt(q) <= hi, at most one unit of 2^-bits / denominator(q) apart."""
    if q < 0:
        raise ValueError("negative radicand")
    scale = 1 << bits
    n = q.numerator * q.denominator * scale * scale
    r = math.isqrt(n)
    den = q.denominator * scale
    lo = Fraction(r, den)
    hi = lo if r * r == n else Fraction(r + 1, den)
    return lo, hi


@dataclass(frozen=True)
class BallTrace:
    """Trace on R of an open chord-metric ball.

    ``kind`` is ``"bounded"`` (the open interval ``(lo, hi)``), ``"co-compact"``
    (``x_inf`` lies inside the ball; ``cocompact`` holds the set) or
    ``"boundary"`` (``x_inf`` is on the sphere: unbounded but not co-compact).
    Irrational endpoints are rounded outward so the stored set contains the ball.
    """

    kind: str
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    cocompact: Optional[CoCompactSet] = None

    @property
    def wraps(self) -> bool:
        return self.kind == "co-compact"

    def complement(self) -> IntervalUnion:
        if self.kind == "co-compact":
            return self.cocompact.complement
        if self.kind == "bounded":
            return IntervalUnion([Interval(NEG_INF, self.lo), Interval(self.hi, INF)])
        if self.lo is None and self.hi is None:
            return IntervalUnion()
        if self.lo is not None:  # the ray (lo, inf)
            return IntervalUnion([Interval(NEG_INF, self.lo)])
        return IntervalUnion([Interval(self.hi, INF)])


def ball_trace(m: CompactTypeMetric, center, delta) -> BallTrace:
    """``{y in R : d(center, y) < delta}``."""
    c, delta = as_fraction(center), as_fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    d2 = delta * delta
    if d2 > 4:
        return BallTrace("co-compact", cocompact=CoCompactSet(IntervalUnion()))
    k = d2 * (1 + c * c)
    # d(c, y)^2 < delta^2  <=>  (4 - k) y^2 - 8 c y + (4 c^2 - k) < 0
    a2, a1, a0 = 4 - k, -8 * c, 4 * c * c - k
    if a2 == 0:
        # x_inf on the sphere: a half-line (or all of R when c = 0)
        if a1 == 0:
            return BallTrace("boundary")
        root = -a0 / a1
        return BallTrace("boundary", lo=root) if a1 < 0 else BallTrace("boundary", hi=root)
    disc = 4 * k * (1 + c * c) * (4 - d2)
    s_lo, s_hi = _sqrt_bounds(disc)
    roots = []
    for sign in (-1, 1):
        ends = sorted(((-a1 + sign * s) / (2 * a2)) for s in (s_lo, s_hi))
        roots.append(ends)
    roots.sort(key=lambda e: e[0])
    (r1_lo, r1_hi), (r2_lo, r2_hi) = roots
    if a2 > 0:
        return BallTrace("bounded", lo=r1_lo, hi=r2_hi)
    if r1_hi > r2_lo:  # degenerate complement (delta = 2 up to rounding)
        return BallTrace("co-compact", cocompact=CoCompactSet(IntervalUnion()))
    return BallTrace("co-compact", cocompact=CoCompactSet(IntervalUnion([Interval(r1_hi, r2_lo)])))


class NoWrappingBall(CocompactError):
    pass


def _covers_line(traces: Sequence[BallTrace]) -> bool:
    common = IntervalUnion([Interval(NEG_INF, INF)])
    for t in traces:
        common = common.intersection(t.complement())
        if common.is_empty:
            return True
    return common.is_empty


def cocompactify_ball_cover(m: CompactTypeMetric, centers: Sequence, delta_range: tuple,
                            candidates: int = 64) -> tuple[Fraction, CoCompactCover]:
    """Turn the ball cover ``{B(x_i, delta)}`` into a co-compact cover of equal cardinality.

    Picks the smallest of ``candidates`` equally spaced radii in ``(a, b)`` that puts
    ``x_inf`` on no sphere and inside at least one ball; wrapping balls are kept,
    every other ball is merged with the first wrapping one.
    """
    a, b = (as_fraction(v) for v in delta_range)
    if not 0 < a < b:
        raise ValueError("need 0 < a < b")
    centers = [as_fraction(c) for c in centers]
    if not centers:
        raise NotACover("no balls")
    grid = [a + (b - a) * Fraction(i, candidates + 1) for i in range(1, candidates + 1)]
    if not _covers_line([ball_trace(m, c, grid[0]) for c in centers]):
        raise NotACover("the balls do not cover R")
    for delta in grid:
        if any(m.squared(c, X_INF) == delta * delta for c in centers):
            continue
        traces = [ball_trace(m, c, delta) for c in centers]
        wrapping = [i for i, t in enumerate(traces) if t.wraps]
        if not wrapping:
            continue
        star = traces[wrapping[0]].cocompact.complement
        members = []
        for t in traces:
            if t.wraps:
                members.append(t.cocompact)
            else:
                members.append(CoCompactSet(star.intersection(t.complement())))
        return delta, CoCompactCover(tuple(members))
    raise NoWrappingBall("no radius in the range puts x_inf inside a ball")
