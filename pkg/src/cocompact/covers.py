"""Co-compact open sets and covers of the real line.

An open set ``R \\ A`` is stored through its compact complement ``A`` (a bounded
:class:`IntervalUnion`).  Covers are finite, so every question here is decided
exactly on finitely many rational "atoms": the endpoints of all complements and
the open gaps between them.
"""
from __future__ import annotations

import csv
import io
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .config import CoverBudget
from .errors import BudgetExceeded, NotACover, NotPerfect, SpecError
from .intervals import Interval, IntervalUnion, parse_endpoint
from .plmap import PLMap, is_perfect, load_json_located, preimage_union


@dataclass(frozen=True)
class CoCompactSet:
    """The open set ``R \\ complement``."""

    complement: IntervalUnion

    def __post_init__(self) -> None:
        if not isinstance(self.complement, IntervalUnion):
            object.__setattr__(self, "complement", IntervalUnion(self.complement))
        if not self.complement.bounded:
            raise ValueError("complement of a co-compact set must be bounded")

    @classmethod
    def minus(cls, *pairs) -> "CoCompactSet":
        """``CoCompactSet.minus((0, 1), (2, 3))`` is ``R \\ ([0,1] ∪ [2,3])``."""
        return cls(IntervalUnion.from_pairs(pairs))

    @property
    def is_whole_line(self) -> bool:
        return self.complement.is_empty

    def __contains__(self, x) -> bool:
        return x not in self.complement

    def issubset(self, other: "CoCompactSet") -> bool:
        return other.complement.issubset(self.complement)

    def intersection(self, other: "CoCompactSet") -> "CoCompactSet":
        return CoCompactSet(self.complement.union(other.complement))

    def __str__(self) -> str:
        if self.is_whole_line:
            return "R"
        return "R \\ " + " ∪ ".join(map(str, self.complement))


def is_cover(sets: Iterable[CoCompactSet]) -> bool:
    """True iff the complements have empty common intersection."""
    sets = list(sets)
    if not sets:
        return False
    common = sets[0].complement
    for s in sets[1:]:
        if common.is_empty:
            break
        common = common.intersection(s.complement)
    return common.is_empty


@dataclass(frozen=True)
class CoCompactCover:
    members: tuple[CoCompactSet, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(self.members))
        if not is_cover(self.members):
            raise NotACover("members do not cover R")

    @classmethod
    def of(cls, *members: CoCompactSet) -> "CoCompactCover":
        return cls(members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def complements(self) -> list[IntervalUnion]:
        return [m.complement for m in self.members]

    def member_set(self) -> frozenset[IntervalUnion]:
        return frozenset(self.complements())

    def to_json(self) -> dict:
        return {"members": [{"complement": m.complement.to_json()} for m in self.members]}


def _dedup(complements: Iterable[IntervalUnion]) -> list[IntervalUnion]:
    seen: dict[IntervalUnion, None] = {}
    for c in complements:
        seen.setdefault(c, None)
    return list(seen)


def join(U: CoCompactCover, V: CoCompactCover, budget: CoverBudget = CoverBudget()) -> CoCompactCover:
    """All pairwise intersections, duplicates removed by exact complement equality."""
    if len(U) * len(V) > budget.max_join_elements:
        raise BudgetExceeded(
            f"join of {len(U)} x {len(V)} members exceeds {budget.max_join_elements} elements"
        )
    comps = _dedup(a.union(b) for a in U.complements() for b in V.complements())
    return CoCompactCover(tuple(CoCompactSet(c) for c in comps))


def refines(V: CoCompactCover, U: CoCompactCover) -> bool:
    """``V ≺ U``: every member of ``U`` lies inside some member of ``V``."""
    return all(any(u.issubset(v) for v in V.members) for u in U.members)


def reduce_cover(U: CoCompactCover) -> CoCompactCover:
    """Drop members contained in another member (keeping the first of equals).

    A subcover using a dropped member can swap in the larger one, so the
    minimal subcover count is unchanged; so is that of any later join or preimage.
    """
    comps = _dedup(U.complements())
    keep = []
    for i, c in enumerate(comps):
        dominated = any(
            j != i and d.issubset(c) and (d != c) for j, d in enumerate(comps)
        )
        if not dominated:
            keep.append(c)
    return CoCompactCover(tuple(CoCompactSet(c) for c in keep))


# ---------------------------------------------------------------------------
# exact minimal subcover


def _atom_masks(complements: Sequence[IntervalUnion]) -> tuple[list[int], int]:
    """Bit ``a`` of ``masks[m]`` is set when member ``m`` covers atom ``a``."""
    pts = sorted({p for c in complements for p in c.endpoints()})
    reps: list[Fraction] = []
    for i, p in enumerate(pts):
        reps.append(p)
        if i + 1 < len(pts):
            reps.append((p + pts[i + 1]) / 2)
    masks = []
    for c in complements:
        mask = 0
        for a, x in enumerate(reps):
            if x not in c:
                mask |= 1 << a
        masks.append(mask)
    return masks, (1 << len(reps)) - 1


class _SetCover:
    """Exact minimum set cover over bitmasks by iterative deepening branch-and-bound."""

    def __init__(self, masks: Sequence[int], universe: int, max_nodes: int) -> None:
        self.masks = list(masks)
        self.universe = universe
        self.max_nodes = max_nodes
        self.nodes = 0
        self.n_atoms = universe.bit_length()

    def _coverers(self, atom_bit: int, start: int) -> list[int]:
        return [j for j in range(start, len(self.masks)) if self.masks[j] & atom_bit]

    def feasible(self, uncovered: int, k: int, start: int = 0) -> bool:
        """Can members with index >= start cover ``uncovered`` using at most k of them?"""
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise BudgetExceeded(f"subcover search exceeded {self.max_nodes} nodes")
        if uncovered == 0:
            return True
        if k == 0:
            return False
        best_gain = max((bin(self.masks[j] & uncovered).count("1") for j in range(start, len(self.masks))),
                        default=0)
        if best_gain == 0 or best_gain * k < bin(uncovered).count("1"):
            return False
        # branch on the uncovered atom with the fewest coverers
        best_cov = None
        rest = uncovered
        while rest:
            bit = rest & -rest
            rest ^= bit
            cov = self._coverers(bit, start)
            if not cov:
                return False
            if best_cov is None or len(cov) < len(best_cov):
                best_cov = cov
                if len(cov) == 1:
                    break
        for j in best_cov:
            if self.feasible(uncovered & ~self.masks[j], k - 1, start):
                return True
        return False

    def minimum(self) -> int:
        k = 1
        while not self.feasible(self.universe, k):
            k += 1
        return k

    def lex_first(self, k: int) -> list[int]:
        chosen, uncovered, start = [], self.universe, 0
        for depth in range(k):
            for j in range(start, len(self.masks)):
                rest = uncovered & ~self.masks[j]
                if self.feasible(rest, k - depth - 1, j + 1):
                    chosen.append(j)
                    uncovered, start = rest, j + 1
                    break
        return chosen


def minimal_subcover(U: CoCompactCover, budget: CoverBudget = CoverBudget()) -> list[int]:
    """Indices of a minimum-cardinality subcover, lexicographically first among them."""
    comps = U.complements()
    if any(c.is_empty for c in comps):
        return [next(i for i, c in enumerate(comps) if c.is_empty)]
    masks, universe = _atom_masks(comps)
    reduced = sorted(set(masks))
    reduced = [m for m in reduced if not any(m != o and m & o == m for o in reduced)]
    if len(reduced) > budget.max_members:
        raise BudgetExceeded(
            f"{len(reduced)} non-redundant members exceed the cap of {budget.max_members}"
        )
    solver = _SetCover(reduced, universe, budget.max_nodes)
    k = solver.minimum()
    return _SetCover(masks, universe, budget.max_nodes).lex_first(k)


def minimal_subcover_count(U: CoCompactCover, budget: CoverBudget = CoverBudget()) -> int:
    """N(U): the smallest number of members that still cover R."""
    return len(minimal_subcover(U, budget))


def cover_H(U: CoCompactCover, budget: CoverBudget = CoverBudget()) -> float:
    return math.log(minimal_subcover_count(U, budget))


def preimage_set(f: PLMap, S: CoCompactSet) -> CoCompactSet:
    return CoCompactSet(preimage_union(f, S.complement))


def preimage_cover(f: PLMap, U: CoCompactCover) -> CoCompactCover:
    if not is_perfect(f):
        raise NotPerfect("preimages of co-compact sets need a perfect map")
    return CoCompactCover(tuple(preimage_set(f, m) for m in U.members))


# ---------------------------------------------------------------------------
# cover entropy sequence


@dataclass
class CoverEntropySeries:
    counts: list[int]  # N_n for n = 1..n_max
    direction: str = "upper-bound"
    params: dict = field(default_factory=dict)

    @property
    def a(self) -> list[float]:
        return [math.log(c) for c in self.counts]

    @property
    def ratios(self) -> list[float]:
        return [a / n for n, a in enumerate(self.a, start=1)]

    @property
    def estimate(self) -> float:
        """min a_n / n; dominates c(f, U) by subadditivity."""
        return min(self.ratios)

    def running_min(self) -> list[float]:
        out, best = [], math.inf
        for r in self.ratios:
            best = min(best, r)
            out.append(best)
        return out

    def subadditivity_violations(self) -> list[tuple[int, int]]:
        """Pairs (n, p) with N_{n+p} > N_n * N_p, checked on exact integers."""
        c = self.counts
        bad = []
        for n in range(1, len(c) + 1):
            for p in range(1, len(c) + 1 - n):
                if c[n + p - 1] > c[n - 1] * c[p - 1]:
                    bad.append((n, p))
        return bad

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "N_n", "a_n", "a_n_over_n"])
        for n, (c, a) in enumerate(zip(self.counts, self.a), start=1):
            w.writerow([n, c, f"{a:.12g}", f"{a / n:.12g}"])
        return buf.getvalue()


def join_sequence(f: PLMap, U: CoCompactCover, n_max: int,
                  budget: CoverBudget = CoverBudget()) -> Iterable[CoCompactCover]:
    """Yield (reduced forms of) ``U ∨ f^{-1}U ∨ ... ∨ f^{-(n-1)}U`` for n = 1..n_max."""
    W = reduce_cover(U)
    yield W
    base = reduce_cover(U)
    for _ in range(n_max - 1):
        W = reduce_cover(join(base, preimage_cover(f, W), budget))
        yield W


def cover_entropy_sequence(f: PLMap, U: CoCompactCover, n_max: int,
                           budget: CoverBudget = CoverBudget()) -> CoverEntropySeries:
    if not is_perfect(f):
        raise NotPerfect("cover entropy needs a perfect map")
    if not is_cover(U.members):
        raise NotACover("U does not cover R")
    counts = [minimal_subcover_count(W, budget) for W in join_sequence(f, U, n_max, budget)]
    return CoverEntropySeries(counts, params={"n_max": n_max, "members": len(U)})


# ---------------------------------------------------------------------------
# files and random covers


def parse_cover_spec(text: str) -> CoCompactCover:
    doc = load_json_located(text)
    if not isinstance(doc, dict) or not isinstance(doc.get("members"), list):
        raise SpecError("cover spec needs a 'members' list", 1)
    members = []
    for member in doc["members"]:
        if not isinstance(member, dict) or not isinstance(member.get("complement"), list):
            raise SpecError(f"member needs a 'complement' list: {member!r}")
        ivs = []
        for pair in member["complement"]:
            if not isinstance(pair, list) or len(pair) != 2:
                raise SpecError(f"complement intervals are [lo, hi] pairs: {pair!r}")
            try:
                lo, hi = (parse_endpoint(p) for p in pair)
                ivs.append(Interval(lo, hi))
            except (ValueError, TypeError, AttributeError) as exc:
                raise SpecError(str(exc), getattr(pair[0], "line", None)) from None
        try:
            members.append(CoCompactSet(IntervalUnion(ivs)))
        except ValueError as exc:
            raise SpecError(str(exc), getattr(member["complement"][0][0], "line", None)
                            if member["complement"] else None) from None
    try:
        return CoCompactCover(tuple(members))
    except NotACover as exc:
        raise SpecError(str(exc)) from None


def dump_cover(U: CoCompactCover) -> str:
    return json.dumps(U.to_json(), indent=2) + "\n"


def random_cover(rng: random.Random, max_members: int = 3, max_pieces: int = 2,
                 span: int = 3, denominator: int = 2) -> CoCompactCover:
    """Random small co-compact cover with rational endpoints in ``[-span, span]``."""
    grid = [Fraction(k, denominator) for k in range(-span * denominator, span * denominator + 1)]
    while True:
        members = []
        for _ in range(rng.randint(1, max_members)):
            pieces = []
            for _ in range(rng.randint(0, max_pieces)):
                a, b = sorted(rng.sample(grid, 2))
                pieces.append(Interval(a, b))
            members.append(CoCompactSet(IntervalUnion(pieces)))
        if is_cover(members):
            return CoCompactCover(tuple(members))
