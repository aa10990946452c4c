"""Exact continuous piecewise-linear self-maps of the real line.

A map is stored as strictly increasing breakpoints ``b_0 < ... < b_{k-1}`` and
``k + 1`` affine segments ``(slope, intercept)``; segment ``i`` lives on
``[b_{i-1}, b_i]`` with ``b_{-1} = -inf`` and ``b_k = +inf``.  All arithmetic is
done in :class:`fractions.Fraction`.
"""
from __future__ import annotations

import enum
import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .config import breakpoint_budget
from .errors import BudgetExceeded, SpecError, ZeroSlopeSegment
from .intervals import (
    INF,
    NEG_INF,
    Interval,
    IntervalUnion,
    Number,
    as_fraction,
    format_rational,
    is_finite,
    parse_rational,
)

Segment = tuple[Fraction, Fraction]


class EndClass(enum.Enum):
    C1 = "C1"  # both ends -> -inf
    C2 = "C2"  # both ends -> +inf
    C3 = "C3"  # -inf -> -inf, +inf -> +inf
    C4 = "C4"  # -inf -> +inf, +inf -> -inf
    NON_DIVERGENT = "NonDivergent"


@dataclass(frozen=True)
class Lap:
    interval: Interval
    direction: int  # +1 increasing, -1 decreasing

    @property
    def increasing(self) -> bool:
        return self.direction > 0


class PLMap:
    """Immutable continuous piecewise-linear map R -> R.

    Adjacent segments with identical coefficients are merged on construction,
    so two maps are equal exactly when they agree as functions.
    """

    __slots__ = ("breakpoints", "segments", "_float_cache")

    def __init__(self, breakpoints: Sequence, segments: Sequence[Sequence]) -> None:
        bps = [as_fraction(b) for b in breakpoints]
        segs = [(as_fraction(s), as_fraction(t)) for s, t in segments]
        if len(segs) != len(bps) + 1:
            raise ValueError(
                f"need {len(bps) + 1} segments for {len(bps)} breakpoints, got {len(segs)}"
            )
        for a, b in zip(bps, bps[1:]):
            if not a < b:
                raise ValueError(f"breakpoints not strictly increasing at {a}, {b}")
        for i, b in enumerate(bps):
            left = segs[i][0] * b + segs[i][1]
            right = segs[i + 1][0] * b + segs[i + 1][1]
            if left != right:
                raise ValueError(f"discontinuous at {b}: {left} != {right}")
        keep_bps: list[Fraction] = []
        keep_segs: list[Segment] = [segs[0]]
        for b, seg in zip(bps, segs[1:]):
            if seg == keep_segs[-1]:
                continue
            keep_bps.append(b)
            keep_segs.append(seg)
        self.breakpoints: tuple[Fraction, ...] = tuple(keep_bps)
        self.segments: tuple[Segment, ...] = tuple(keep_segs)
        self._float_cache = None

    # construction helpers
    @classmethod
    def linear(cls, slope, intercept=0) -> "PLMap":
        return cls([], [(slope, intercept)])

    @classmethod
    def identity(cls) -> "PLMap":
        return cls.linear(1, 0)

    @classmethod
    def from_values(cls, breakpoints: Sequence, values: Sequence, left_slope, right_slope) -> "PLMap":
        """Interpolate ``values`` at ``breakpoints`` and extend with the given end slopes."""
        bps = [as_fraction(b) for b in breakpoints]
        vals = [as_fraction(v) for v in values]
        if not bps:
            raise ValueError("need at least one breakpoint")
        ls, rs = as_fraction(left_slope), as_fraction(right_slope)
        segs = [(ls, vals[0] - ls * bps[0])]
        for (x0, y0), (x1, y1) in zip(zip(bps, vals), zip(bps[1:], vals[1:])):
            s = (y1 - y0) / (x1 - x0)
            segs.append((s, y0 - s * x0))
        segs.append((rs, vals[-1] - rs * bps[-1]))
        return cls(bps, segs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PLMap):
            return NotImplemented
        return self.breakpoints == other.breakpoints and self.segments == other.segments

    def __hash__(self) -> int:
        return hash((self.breakpoints, self.segments))

    def __repr__(self) -> str:
        bps = ", ".join(map(str, self.breakpoints))
        segs = ", ".join(f"{s}x{'+' if t >= 0 else '-'}{abs(t)}" for s, t in self.segments)
        return f"PLMap(breakpoints=[{bps}], segments=[{segs}])"

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    def domain(self, i: int) -> Interval:
        lo = self.breakpoints[i - 1] if i > 0 else NEG_INF
        hi = self.breakpoints[i] if i < len(self.breakpoints) else INF
        return Interval(lo, hi)

    def segment_index(self, x) -> int:
        return bisect_left(self.breakpoints, x)

    def values_at_breakpoints(self) -> list[Fraction]:
        return [self.segments[i][0] * b + self.segments[i][1] for i, b in enumerate(self.breakpoints)]

    # float view for numerical estimators
    def evaluate_float(self, x: np.ndarray) -> np.ndarray:
        if self._float_cache is None:
            self._float_cache = (
                np.array([float(b) for b in self.breakpoints], dtype=float),
                np.array([float(s) for s, _ in self.segments], dtype=float),
                np.array([float(t) for _, t in self.segments], dtype=float),
            )
        bps, slopes, icpts = self._float_cache
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(bps, x, side="left")
        with np.errstate(invalid="ignore"):
            return slopes[idx] * x + icpts[idx]

    # serialization
    def to_json(self) -> dict:
        return {
            "breakpoints": [format_rational(b) for b in self.breakpoints],
            "segments": [
                {"slope": format_rational(s), "intercept": format_rational(t)} for s, t in self.segments
            ],
        }


def evaluate(f: PLMap, x) -> Fraction:
    s, t = f.segments[f.segment_index(x)]
    return s * x + t


def _affine_image(s: Fraction, t: Fraction, lo: Number, hi: Number) -> tuple[Number, Number]:
    """Image of [lo, hi] under y = s x + t, with infinite endpoints handled by sign."""
    def at(x):
        if is_finite(x):
            return s * x + t
        if s == 0:
            return t
        return x if s > 0 else -x

    a, b = at(lo), at(hi)
    return (a, b) if a <= b else (b, a)


def compose(f: PLMap, g: PLMap, budget: Optional[int] = None) -> PLMap:
    """Return ``f o g`` exactly."""
    cap = breakpoint_budget(budget)
    fb = f.breakpoints
    new_bps: list[Fraction] = []
    new_segs: list[Segment] = []
    for i, (s, t) in enumerate(g.segments):
        dom = g.domain(i)
        if i > 0:
            new_bps.append(dom.lo)
        if s == 0:
            sf, tf = f.segments[f.segment_index(t)]
            new_segs.append((Fraction(0), sf * t + tf))
            continue
        ymin, ymax = _affine_image(s, t, dom.lo, dom.hi)
        a = bisect_right(fb, ymin)
        e = bisect_left(fb, ymax)
        inner = fb[a:e]
        seg_ids = list(range(a, e + 1))
        cuts = [(y - t) / s for y in inner]
        if s < 0:
            cuts.reverse()
            seg_ids.reverse()
        for k, j in enumerate(seg_ids):
            if k > 0:
                new_bps.append(cuts[k - 1])
            sf, tf = f.segments[j]
            new_segs.append((sf * s, sf * t + tf))
        if len(new_bps) > cap:
            raise BudgetExceeded(f"composition exceeds breakpoint budget {cap}")
    return PLMap(new_bps, new_segs)


def iterate(f: PLMap, n: int, budget: Optional[int] = None) -> PLMap:
    """Return the n-th iterate ``f^n`` (n >= 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    h = f
    for _ in range(n - 1):
        h = compose(f, h, budget)
    return h


def iterates(f: PLMap, n_max: int, budget: Optional[int] = None) -> Iterator[PLMap]:
    """Yield ``f, f^2, ..., f^n_max``."""
    h = f
    yield h
    for _ in range(n_max - 1):
        h = compose(f, h, budget)
        yield h


def classify_ends(f: PLMap) -> EndClass:
    left, right = f.segments[0][0], f.segments[-1][0]
    if left == 0 or right == 0:
        return EndClass.NON_DIVERGENT
    # slope > 0 on the left end sends -inf to -inf
    at_minus = -1 if left > 0 else 1
    at_plus = 1 if right > 0 else -1
    return {
        (-1, -1): EndClass.C1,
        (1, 1): EndClass.C2,
        (-1, 1): EndClass.C3,
        (1, -1): EndClass.C4,
    }[(at_minus, at_plus)]


def is_perfect(f: PLMap) -> bool:
    # continuous PL map with finitely many breakpoints is proper iff both end slopes are nonzero
    return f.segments[0][0] != 0 and f.segments[-1][0] != 0


def is_surjective(f: PLMap) -> bool:
    return classify_ends(f) in (EndClass.C3, EndClass.C4)


def preimage_interval(f: PLMap, target: Interval) -> IntervalUnion:
    """Exact ``f^{-1}(target)`` solved segment by segment."""
    pieces = []
    for i, (s, t) in enumerate(f.segments):
        dom = f.domain(i)
        if s == 0:
            if t in target:
                pieces.append(dom)
            continue
        x1, x2 = (target.lo - t) / s, (target.hi - t) / s
        lo, hi = (x1, x2) if x1 <= x2 else (x2, x1)
        lo, hi = max(lo, dom.lo), min(hi, dom.hi)
        if lo <= hi:
            pieces.append(Interval(_clean(lo), _clean(hi)))
    return IntervalUnion(pieces)


def preimage_union(f: PLMap, region: IntervalUnion) -> IntervalUnion:
    out: list[Interval] = []
    for iv in region:
        out.extend(preimage_interval(f, iv))
    return IntervalUnion(out)


def _clean(x: Number) -> Number:
    # infinities arising from Fraction/float mixing stay floats; finite values must be Fractions
    if isinstance(x, float) and is_finite(x):
        return Fraction(x)
    return x


def image_interval(f: PLMap, dom: Interval) -> Interval:
    """Exact ``f(dom)``; continuity makes it an interval."""
    lo_i = f.segment_index(dom.lo) if is_finite(dom.lo) else 0
    hi_i = f.segment_index(dom.hi) if is_finite(dom.hi) else len(f.segments) - 1
    lo_v, hi_v = INF, NEG_INF
    for i in range(lo_i, hi_i + 1):
        seg_dom = f.domain(i).intersection(dom)
        if seg_dom is None:
            continue
        a, b = _affine_image(*f.segments[i], seg_dom.lo, seg_dom.hi)
        lo_v, hi_v = min(lo_v, a), max(hi_v, b)
    return Interval(lo_v, hi_v)


def laps(f: PLMap, within: Optional[Interval] = None) -> list[Lap]:
    """Maximal strictly monotone pieces, optionally of the restriction to ``within``."""
    out: list[Lap] = []
    for i, (s, _) in enumerate(f.segments):
        dom = f.domain(i)
        if within is not None:
            dom = dom.intersection(within)
            if dom is None or dom.degenerate:
                continue
        if s == 0:
            raise ZeroSlopeSegment(f"segment {i} on {dom} has zero slope")
        d = 1 if s > 0 else -1
        if out and out[-1].direction == d:
            out[-1] = Lap(Interval(out[-1].interval.lo, dom.hi), d)
        else:
            out.append(Lap(dom, d))
    return out


def lap_count(f: PLMap, within: Optional[Interval] = None) -> int:
    return len(laps(f, within))


def iter_monotone_pieces(f: PLMap, m: int) -> Iterator[tuple[Interval, Fraction]]:
    """Yield affine pieces ``(domain, slope)`` of ``f^m`` left to right without building it.

    Pieces are exact but not necessarily maximal.
    """
    fb = f.breakpoints

    def rec(dom: Interval, s: Fraction, t: Fraction, depth: int):
        if depth == m:
            yield dom, s
            return
        if s == 0:
            sf, tf = f.segments[f.segment_index(t)]
            yield from rec(dom, Fraction(0), sf * t + tf, depth + 1)
            return
        ymin, ymax = _affine_image(s, t, dom.lo, dom.hi)
        a = bisect_right(fb, ymin)
        e = bisect_left(fb, ymax)
        inner = fb[a:e]
        seg_ids = list(range(a, e + 1))
        cuts = [(y - t) / s for y in inner]
        if s < 0:
            cuts.reverse()
            seg_ids.reverse()
        edges = [dom.lo, *cuts, dom.hi]
        for k, j in enumerate(seg_ids):
            sf, tf = f.segments[j]
            yield from rec(Interval(edges[k], edges[k + 1]), sf * s, sf * t + tf, depth + 1)

    yield from rec(Interval(NEG_INF, INF), Fraction(1), Fraction(0), 0)


def count_iterate_laps(f: PLMap, m: int, stop_at: Optional[int] = None,
                       budget: Optional[int] = None) -> int:
    """Exact lap count of ``f^m`` (or ``stop_at`` as soon as that many laps are seen)."""
    cap = breakpoint_budget(budget)
    count, last, pieces = 0, 0, 0
    for _, s in iter_monotone_pieces(f, m):
        pieces += 1
        if pieces > cap + 1:
            raise BudgetExceeded(f"f^{m} exceeds breakpoint budget {cap}")
        if s == 0:
            raise ZeroSlopeSegment(f"f^{m} has a zero-slope piece")
        d = 1 if s > 0 else -1
        if d != last:
            count += 1
            last = d
            if stop_at is not None and count >= stop_at:
                return count
    return count


def _turning_points(f: PLMap) -> tuple[list[Fraction], list[Fraction]]:
    xs, ys = [], []
    for i, b in enumerate(f.breakpoints):
        s0, s1 = f.segments[i][0], f.segments[i + 1][0]
        if s0 == 0 or s1 == 0:
            raise ZeroSlopeSegment(f"zero slope next to breakpoint {b}")
        if (s0 > 0) != (s1 > 0):
            xs.append(b)
            ys.append(s1 * b + f.segments[i + 1][1])
    return xs, ys


def _compress(values: list) -> list:
    """Keep only the alternating extremes of a sequence of values."""
    out = [values[0]]
    for v in values[1:]:
        if v == out[-1]:
            continue
        if len(out) >= 2 and (out[-2] < out[-1] < v or out[-2] > out[-1] > v):
            out[-1] = v
        else:
            out.append(v)
    return out


def iterate_turning_values(f: PLMap, n_max: int, budget: Optional[int] = None) -> Iterator[list]:
    """Yield, for n = 1..n_max, the values of ``f^n`` at -inf, its turning points and +inf.

    Only these values are composed, so ``len - 1`` is the exact lap count of ``f^n``
    at a fraction of the cost of building the iterate.  Needs nonzero slopes.
    """
    if not is_perfect(f):
        raise ValueError("turning values need nonzero end slopes")
    cap = breakpoint_budget(budget)
    tx, ty = _turning_points(f)
    left_s, right_s = f.segments[0][0], f.segments[-1][0]

    def at(y):
        if is_finite(y):
            return evaluate(f, y)
        slope = right_s if y > 0 else left_s
        return y if slope > 0 else -y

    vals = [NEG_INF, INF]
    for _ in range(n_max):
        out = [at(vals[0])]
        for a, b in zip(vals, vals[1:]):
            if a < b:
                out.extend(ty[bisect_right(tx, a):bisect_left(tx, b)])
            else:
                out.extend(reversed(ty[bisect_right(tx, b):bisect_left(tx, a)]))
            out.append(at(b))
        vals = _compress(out)
        if len(vals) > cap + 2:
            raise BudgetExceeded(f"iterate exceeds breakpoint budget {cap}")
        yield vals


def iterate_lap_counts(f: PLMap, n_max: int, budget: Optional[int] = None) -> Iterator[int]:
    for vals in iterate_turning_values(f, n_max, budget):
        yield len(vals) - 1


def affine_conjugate(f: PLMap, a, b) -> PLMap:
    """Return ``psi o f o psi^{-1}`` for ``psi(x) = a x + b`` (a != 0)."""
    a, b = as_fraction(a), as_fraction(b)
    if a == 0:
        raise ValueError("psi must be invertible")
    bps = [a * x + b for x in f.breakpoints]
    segs = [(s, a * t + b - s * b) for s, t in f.segments]
    if a < 0:
        bps.reverse()
        segs.reverse()
    return PLMap(bps, segs)


def affine_image_interval(iv: Interval, a, b) -> Interval:
    a, b = as_fraction(a), as_fraction(b)
    lo, hi = a * iv.lo + b, a * iv.hi + b
    return Interval(min(lo, hi), max(lo, hi))


# ---------------------------------------------------------------------------
# map-spec files


class _LocatedStr(str):
    line: int


class _LocatingDecoder(json.JSONDecoder):
    """JSON decoder whose string values remember their source line."""

    def __init__(self, text: str) -> None:
        super().__init__()
        line_starts = [0]
        for i, ch in enumerate(text):
            if ch == "\n":
                line_starts.append(i + 1)
        base_parse = self.parse_string

        def parse_string(s, end, strict):
            value, new_end = base_parse(s, end, strict)
            located = _LocatedStr(value)
            located.line = bisect_right(line_starts, end - 1)
            return located, new_end

        self.parse_string = parse_string
        self.scan_once = json.scanner.py_make_scanner(self)


def load_json_located(text: str):
    try:
        return _LocatingDecoder(text).decode(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc.msg}", exc.lineno) from None


def _line(value) -> Optional[int]:
    return getattr(value, "line", None)


def _rational_field(value) -> Fraction:
    if not isinstance(value, str):
        raise SpecError(f"rationals must be strings, got {value!r}")
    try:
        return parse_rational(value, strict=True)
    except ValueError as exc:
        raise SpecError(str(exc), _line(value)) from None


def parse_map_spec(text: str) -> PLMap:
    doc = load_json_located(text)
    if not isinstance(doc, dict) or "breakpoints" not in doc or "segments" not in doc:
        raise SpecError("map spec needs 'breakpoints' and 'segments'", 1)
    raw_bps, raw_segs = doc["breakpoints"], doc["segments"]
    if not isinstance(raw_bps, list) or not isinstance(raw_segs, list):
        raise SpecError("'breakpoints' and 'segments' must be lists", 1)
    bps = [_rational_field(b) for b in raw_bps]
    segs = []
    for seg in raw_segs:
        if not isinstance(seg, dict) or set(seg) != {"slope", "intercept"}:
            raise SpecError(f"segment must have exactly 'slope' and 'intercept': {seg!r}")
        segs.append((_rational_field(seg["slope"]), _rational_field(seg["intercept"])))
    if len(segs) != len(bps) + 1:
        raise SpecError(f"need {len(bps) + 1} segments for {len(bps)} breakpoints, got {len(segs)}")
    for k, (a, b) in enumerate(zip(bps, bps[1:])):
        if not a < b:
            raise SpecError(f"breakpoints not strictly increasing at {b}", _line(raw_bps[k + 1]))
    for i, b in enumerate(bps):
        left = segs[i][0] * b + segs[i][1]
        right = segs[i + 1][0] * b + segs[i + 1][1]
        if left != right:
            raise SpecError(f"discontinuous at breakpoint {b}: {left} != {right}", _line(raw_bps[i]))
    return PLMap(bps, segs)


def load_map(path) -> PLMap:
    with open(path, encoding="utf-8") as fh:
        return parse_map_spec(fh.read())


def dump_map(f: PLMap) -> str:
    return json.dumps(f.to_json(), indent=2) + "\n"
