"""p-horseshoes for PL maps: exact verification, full-branch search, chain
refinement, itinerary intervals and the resulting entropy lower bound.

A p-horseshoe for ``f^n`` is a family of pairwise disjoint closed nondegenerate
bounded intervals ``J_1 < ... < J_p`` with ``J_1 ∪ ... ∪ J_p ⊆ f^n(J_i)`` for each
``i``.  Everything here is exact rational arithmetic.
"""
from __future__ import annotations

import json
import math
from bisect import bisect_left
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    BudgetExceeded,
    DegenerateInterval,
    InvalidCertificate,
    NotAChain,
    NotPerfect,
    OverlappingIntervals,
    SpecError,
    ZeroSlopeSegment,
)
from .entropy import EntropyEstimate
from .intervals import INF, Interval, is_finite, parse_rational
from .plmap import (
    PLMap,
    affine_conjugate,
    affine_image_interval,
    compose,
    image_interval,
    is_perfect,
    iterate,
)

SHRINK = Fraction(1, 1000)


@dataclass(frozen=True)
class HorseshoeCertificate:
    n: int
    intervals: tuple[Interval, ...]
    verified: bool = False

    @property
    def p(self) -> int:
        return len(self.intervals)

    @property
    def rate(self) -> float:
        return math.log(self.p) / self.n

    def to_json(self) -> dict:
        return {"n": self.n, "intervals": [iv.to_json() for iv in self.intervals],
                "verified": self.verified}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data) -> "HorseshoeCertificate":
        """Parse a certificate; a stored ``verified`` flag is not trusted, run :func:`verify`."""
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise SpecError(exc.msg, exc.lineno) from None
        if not isinstance(data, dict) or "n" not in data or "intervals" not in data:
            raise SpecError("certificate needs 'n' and 'intervals'")
        n = data["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise SpecError(f"'n' must be a positive integer, got {n!r}")
        intervals = []
        for pair in data["intervals"]:
            if not isinstance(pair, list) or len(pair) != 2 or not all(isinstance(v, str) for v in pair):
                raise SpecError(f"interval must be a pair of rational strings, got {pair!r}")
            try:
                lo, hi = (parse_rational(v) for v in pair)
            except ValueError as exc:
                raise SpecError(str(exc)) from None
            if lo > hi:
                raise SpecError(f"interval [{pair[0]}, {pair[1]}] has lo > hi")
            intervals.append(Interval(lo, hi))
        return cls(n, tuple(intervals))


@dataclass(frozen=True)
class IntervalChain:
    """``J_0, ..., J_{k-1}`` with ``J_i ⊆ f(J_{i-1})``; checked by :func:`check_chain`."""

    intervals: tuple[Interval, ...]

    def __len__(self) -> int:
        return len(self.intervals)


def _check_family(intervals: Sequence[Interval]) -> None:
    for iv in intervals:
        if not iv.bounded:
            raise InvalidCertificate(f"{iv} is unbounded")
        if iv.degenerate:
            raise DegenerateInterval(f"{iv} is degenerate")
    ordered = sorted(intervals)
    for a, b in zip(ordered, ordered[1:]):
        if b.lo <= a.hi:
            raise OverlappingIntervals(f"{a} and {b} intersect")


def _covers_all(F: PLMap, intervals: Sequence[Interval]) -> bool:
    hull = Interval(min(iv.lo for iv in intervals), max(iv.hi for iv in intervals))
    # f^n(J_i) is an interval, so it contains the union iff it contains the hull
    return all(image_interval(F, J).contains_interval(hull) for J in intervals)


def verify(f: PLMap, cert: HorseshoeCertificate, budget: Optional[int] = None) -> bool:
    if not is_perfect(f):
        raise NotPerfect("horseshoe verification needs a perfect map")
    if cert.p < 2:
        raise InvalidCertificate("a horseshoe needs at least two intervals")
    _check_family(cert.intervals)
    return _covers_all(iterate(f, cert.n, budget), cert.intervals)


def verified(f: PLMap, cert: HorseshoeCertificate, budget: Optional[int] = None) -> HorseshoeCertificate:
    """Return ``cert`` with its flag set, or raise if it does not verify."""
    if not verify(f, cert, budget):
        raise InvalidCertificate(f"intervals are not a horseshoe for f^{cert.n}")
    return replace(cert, verified=True)


def entropy_lower_bound(cert: HorseshoeCertificate) -> EntropyEstimate:
    if not cert.verified:
        raise InvalidCertificate("certificate has not been verified")
    return EntropyEstimate(cert.rate, "horseshoe", "lower-bound",
                           {"n": cert.n, "p": cert.p})


def map_certificate(cert: HorseshoeCertificate, a, b) -> HorseshoeCertificate:
    """Image of a certificate under ``psi(x) = a x + b``; a candidate for ``psi o f o psi^{-1}``."""
    ivs = sorted(affine_image_interval(iv, a, b) for iv in cert.intervals)
    return HorseshoeCertificate(cert.n, tuple(ivs))


def conjugate_certificate(f: PLMap, cert: HorseshoeCertificate, a, b) -> tuple[PLMap, HorseshoeCertificate]:
    g = affine_conjugate(f, a, b)
    return g, verified(g, map_certificate(cert, a, b))


# ---------------------------------------------------------------------------
# search


@dataclass(frozen=True)
class _LapInfo:
    first: int  # first and last segment index of the lap
    last: int
    direction: int
    image: Interval
    keys: tuple  # direction * value at the interior breakpoints, increasing


def _lap_table(F: PLMap) -> list[_LapInfo]:
    vals = F.values_at_breakpoints()
    runs: list[list[int]] = []
    for i, (s, _) in enumerate(F.segments):
        if s == 0:
            raise ZeroSlopeSegment(f"segment {i} has zero slope")
        d = 1 if s > 0 else -1
        if runs and runs[-1][2] == d:
            runs[-1][1] = i
        else:
            runs.append([i, i, d])
    out = []
    k = len(F.breakpoints)
    for first, last, d in runs:
        left = vals[first - 1] if first > 0 else -d * INF
        right = vals[last] if last < k else d * INF
        lo, hi = (left, right) if d > 0 else (right, left)
        out.append(_LapInfo(first, last, d, Interval(lo, hi),
                            tuple(d * v for v in vals[first:last])))
    return out


def _level_in_lap(F: PLMap, lap: _LapInfo, y: Fraction) -> Fraction:
    j = lap.first + bisect_left(lap.keys, lap.direction * y)
    s, t = F.segments[j]
    return (y - t) / s


def _pullback(F: PLMap, lap: _LapInfo, I: Interval) -> Interval:
    x1, x2 = _level_in_lap(F, lap, I.lo), _level_in_lap(F, lap, I.hi)
    return Interval(min(x1, x2), max(x1, x2))


def _branches_for(F: PLMap, covering: list[_LapInfo], I: Interval) -> list[Interval]:
    """Largest disjoint family of full branches over ``I`` contained in ``I``."""
    # whole branches; adjacent laps share an endpoint, so pick greedily left to right
    plain: list[Interval] = []
    for lap in covering:
        P = _pullback(F, lap, I)
        if I.contains_interval(P) and (not plain or P.lo > plain[-1].hi):
            plain.append(P)
    # branches over a slightly smaller base are strictly inside their laps
    s = I.width * SHRINK
    inner = Interval(I.lo + s, I.hi - s)
    shrunk = [P for P in (_pullback(F, lap, inner) for lap in covering) if inner.contains_interval(P)]
    return shrunk if len(shrunk) > len(plain) else plain


def _critical_values(table: list[_LapInfo], limit: int) -> list[Fraction]:
    values = sorted({v for lap in table for v in (lap.image.lo, lap.image.hi) if is_finite(v)})
    if len(values) > limit:
        # deterministic thinning that keeps both extremes
        idx = sorted({round(i * (len(values) - 1) / (limit - 1)) for i in range(limit)})
        values = [values[i] for i in idx]
    return values


def _better(p1: int, n1: int, p2: int, n2: int) -> bool:
    """Is (log p1)/n1 > (log p2)/n2?  Compared exactly as p1^n2 > p2^n1."""
    return p1 ** n2 > p2 ** n1


def best_for_iterate(F: PLMap, max_values: int = 16) -> Optional[tuple[Interval, ...]]:
    """Best full-family horseshoe for ``F`` itself: max p, then lexicographically smallest."""
    table = _lap_table(F)
    values = _critical_values(table, max_values)
    best: Optional[tuple[Interval, ...]] = None
    for i, a in enumerate(values):
        for b in values[i + 1:]:
            I = Interval(a, b)
            covering = [lap for lap in table if lap.image.contains_interval(I)]
            if len(covering) < 2 or (best is not None and len(covering) < len(best)):
                continue
            fam = tuple(_branches_for(F, covering, I))
            if len(fam) < 2:
                continue
            if best is None or len(fam) > len(best) or (len(fam) == len(best) and _lex(fam) < _lex(best)):
                best = fam
    return best


def _lex(fam: Sequence[Interval]) -> tuple:
    return tuple((iv.lo, iv.hi) for iv in fam)


def search(f: PLMap, n_max: int, lambda_target: Optional[float] = None,
           budget: Optional[int] = None, max_values: int = 16) -> Optional[HorseshoeCertificate]:
    """Best verified full-family horseshoe for ``f^n``, ``n <= n_max``, by rate (log p)/n.

    Ties go to the smaller ``n``.  Stops once the rate reaches ``lambda_target``.
    If an iterate exceeds the breakpoint budget the best certificate found so far
    is returned; with nothing found the budget error propagates.
    """
    if not is_perfect(f):
        raise NotPerfect("horseshoe search needs a perfect map")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    best: Optional[HorseshoeCertificate] = None
    F = f
    for n in range(1, n_max + 1):
        if n > 1:
            try:
                F = compose(f, F, budget)
            except BudgetExceeded:
                if best is None:
                    raise
                break
        fam = best_for_iterate(F, max_values)
        if fam is not None and (best is None or _better(len(fam), n, best.p, best.n)):
            best = HorseshoeCertificate(n, fam)
        if best is not None and lambda_target is not None and best.rate >= lambda_target:
            break
    if best is None:
        return None
    return verified(f, best, budget)


# ---------------------------------------------------------------------------
# chains and itineraries


def check_chain(f: PLMap, chain: IntervalChain) -> None:
    if len(chain) == 0:
        raise NotAChain("empty chain")
    for prev, nxt in zip(chain.intervals, chain.intervals[1:]):
        if not image_interval(f, prev).contains_interval(nxt):
            raise NotAChain(f"{nxt} is not inside f({prev})")


def _level_points(f: PLMap, J: Interval, y, label: int) -> list[tuple]:
    """Points of ``J`` where ``f = y`` (flat pieces contribute their ends); ``y`` may be infinite."""
    if not is_finite(y):
        # the diverging ends of J play the role of level points at +-inf
        pts = []
        left_s, right_s = f.segments[0][0], f.segments[-1][0]
        if not is_finite(J.lo) and -left_s * y > 0:
            pts.append((J.lo, label))
        if not is_finite(J.hi) and right_s * y > 0:
            pts.append((J.hi, label))
        return pts
    pts = []
    for i, (s, t) in enumerate(f.segments):
        dom = f.domain(i).intersection(J)
        if dom is None:
            continue
        if s == 0:
            if t == y:
                pts += [(dom.lo, label), (dom.hi, label)]
            continue
        x = (y - t) / s
        if dom.lo <= x <= dom.hi:
            pts.append((x, label))
    return pts


def pull_back(f: PLMap, J: Interval, K: Interval) -> Interval:
    """Leftmost closed ``L ⊆ J`` with ``f(L) = K`` exactly (needs ``K ⊆ f(J)``)."""
    if K.degenerate:
        return Interval(*(2 * [min(x for x, _ in _level_points(f, J, K.lo, 0))]))
    pts = sorted(set(_level_points(f, J, K.lo, 0) + _level_points(f, J, K.hi, 1)),
                 key=lambda p: (p[0], p[1]))
    for (x1, l1), (x2, l2) in zip(pts, pts[1:]):
        if l1 != l2:
            return Interval(x1, x2)
    raise NotAChain(f"{K} is not inside f({J})")


def refine_chain(f: PLMap, chain: IntervalChain) -> Interval:
    """``K ⊆ J_0`` with ``f^i(K) ⊆ J_i`` and ``f^{k-1}(K) = J_{k-1}`` exactly."""
    if not is_perfect(f):
        raise NotPerfect("chain refinement needs a perfect map")
    check_chain(f, chain)
    K = chain.intervals[-1]
    for J in reversed(chain.intervals[:-1]):
        K = pull_back(f, J, K)
    return K


@dataclass(frozen=True)
class Itinerary:
    symbols: tuple[int, ...]
    intervals: tuple[Interval, ...]  # nested, one per prefix

    @property
    def interval(self) -> Interval:
        return self.intervals[-1]

    @property
    def midpoint(self) -> Fraction:
        iv = self.interval
        return (iv.lo + iv.hi) / 2


def itinerary_point(f: PLMap, cert: HorseshoeCertificate, symbols: Sequence[int],
                    budget: Optional[int] = None) -> Itinerary:
    """Nested intervals ``K_j`` of points whose ``f^{n i}``-orbit follows ``symbols`` (1-based).

    ``K_j ⊆ K_{j-1}`` and ``f^{n j}(K_j) = J_{symbols[j]}`` exactly.
    """
    if not cert.verified:
        raise InvalidCertificate("certificate has not been verified")
    if not symbols:
        raise ValueError("empty word")
    if any(not 1 <= s <= cert.p for s in symbols):
        raise ValueError(f"symbols must lie in 1..{cert.p}")
    F = iterate(f, cert.n, budget)
    J = cert.intervals
    K = J[symbols[0] - 1]
    nested = [K]
    for j in range(1, len(symbols)):
        # chain K, F(K), ..., F^{j-1}(K) = J_{s_{j-1}}, J_{s_j}; refining it keeps K nested
        images = [K]
        for _ in range(j - 1):
            images.append(image_interval(F, images[-1]))
        images.append(J[symbols[j] - 1])
        K = refine_chain(F, IntervalChain(tuple(images)))
        nested.append(K)
    return Itinerary(tuple(symbols), tuple(nested))
