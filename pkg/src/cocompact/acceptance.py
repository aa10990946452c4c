"""Acceptance suite: ten deterministic checks, shared by the tests and ``cocompact check``.

Each check returns a :class:`CriterionResult` whose details hold only
deterministic data (no timings), so two runs with the same seed serialize to the
same bytes.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import corpus
from .compactify import CompactTypeMetric, X_INF, cocompactify_ball_cover
from .config import CoverBudget
from .covers import (
    CoCompactCover,
    CoCompactSet,
    cover_entropy_sequence,
    is_cover,
    join,
    minimal_subcover_count,
    preimage_cover,
    random_cover,
    refines,
)
from .entropy import (
    MarkovMeasure,
    bowen_counts,
    lap_entropy,
    markov_entropy,
    random_markov_measure,
    random_support,
    spectral_entropy,
)
from .errors import BudgetExceeded
from .horseshoe import (
    HorseshoeCertificate,
    conjugate_certificate,
    entropy_lower_bound,
    search,
    verified,
    verify,
)
from .intervals import Interval
from .plmap import count_iterate_laps, is_surjective, iterate, iterate_lap_counts

LN2, LN3 = math.log(2), math.log(3)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"criterion {self.number:2d} [{'PASS' if self.passed else 'FAIL'}] {self.title}"


def _example_certificate() -> HorseshoeCertificate:
    return HorseshoeCertificate(1, (Interval(0, Fraction(1, 3)), Interval(Fraction(2, 3), 1)))


def criterion_1(seed: int = 0) -> CriterionResult:
    f = corpus.example_truncated(1)
    cert = _example_certificate()
    ok_verify = verify(f, cert)
    bound = entropy_lower_bound(verified(f, cert)).value if ok_verify else None
    lap = lap_entropy(f, 10)
    counts = lap.params["lap_counts"]
    gaps = [c - 3 ** n for n, c in enumerate(counts, start=1)]
    passed = (ok_verify and bound == LN2 and abs(lap.value - LN3) <= 1e-6
              and len(counts) == 10 and max(map(abs, gaps)) <= 2)
    return CriterionResult(1, "three-branch map: 2-horseshoe, log 2 bound, lap entropy log 3", passed, {
        "verified": ok_verify, "lower_bound": bound, "lap_entropy": lap.value,
        "lap_counts": counts, "count_minus_3^n": gaps,
    })


def _doubling_cover() -> CoCompactCover:
    return CoCompactCover.of(CoCompactSet.minus((-1, 1)), CoCompactSet.minus((2, 4)))


def criterion_2(seed: int = 0) -> CriterionResult:
    f = corpus.doubling()
    series = cover_entropy_sequence(f, _doubling_cover(), 8)
    stable = all(c == 2 for c in series.counts[2:])
    cover_ok = stable and series.ratios[7] <= 0.1
    K = Interval(0, 1)
    _, sep_e = bowen_counts(f, "euclid", K, 0.25, 8, 1 / 16384)
    _, sep_c = bowen_counts(f, "circle", K, 0.25, 24, 1 / 16384)
    euclid_ok = sep_e.slope >= LN2 - 0.05
    circle_ok = sep_c.slope <= 0.05
    return CriterionResult(2, "doubling map: cover entropy 0, Euclidean Bowen >= log 2, compact-type 0",
                           cover_ok and euclid_ok and circle_ok, {
        "N_n": series.counts, "a_n_over_n": series.ratios, "cover_estimate": series.estimate,
        "cover_ok": cover_ok, "N_n_equals_2_from_3": stable,
        "bowen_euclid_counts": sep_e.counts, "bowen_euclid_slope": sep_e.slope, "euclid_ok": euclid_ok,
        "bowen_circle_counts": sep_c.counts, "bowen_circle_slope": sep_c.slope, "circle_ok": circle_ok,
    })


def criterion_3(seed: int = 0) -> CriterionResult:
    rows = []
    for name, f in (("tent-extended", corpus.tent_extended()), ("example5-m1", corpus.example_truncated(1))):
        base = lap_entropy(f, 10).value
        for m in (2, 3):
            power = lap_entropy(iterate(f, m), 10).value
            rows.append({"map": name, "m": m, "h": base, "h_of_power": power,
                         "error": abs(power - m * base), "ok": abs(power - m * base) <= 0.02})
    return CriterionResult(3, "power rule for lap entropy, m in {2, 3}", all(r["ok"] for r in rows),
                           {"rows": rows})


def criterion_4(seed: int = 0) -> CriterionResult:
    rng = random.Random(seed)
    found, failures = 0, []
    for i in range(50):
        f = corpus.random_perfect_map(rng)
        cert = search(f, 3)
        if cert is None:
            continue
        found += 1
        if not verify(f, cert):
            failures.append({"map": i, "reason": "certificate does not verify"})
            continue
        for k in range(1, 5):
            need = cert.p ** k
            if count_iterate_laps(f, cert.n * k, stop_at=need) < need:
                failures.append({"map": i, "reason": f"lap count of f^{cert.n * k} below {need}"})
                break
    return CriterionResult(4, "horseshoe soundness on 50 random maps", not failures,
                           {"maps": 50, "certificates": found, "failures": failures})


def criterion_5(seed: int = 0) -> CriterionResult:
    rows = []
    for name, f in corpus.named_corpus().items():
        h = lap_entropy(f, 10).value
        if h < 0.5:
            continue
        cert = search(f, 8, 0.5)
        rate = cert.rate if cert else None
        rows.append({"map": name, "lap_entropy": h, "n": cert and cert.n, "p": cert and cert.p,
                     "rate": rate, "ok": rate is not None and rate >= 0.3})
    return CriterionResult(5, "search finds rate >= 0.3 when lap entropy >= 0.5",
                           bool(rows) and all(r["ok"] for r in rows), {"rows": rows})


def criterion_6(seed: int = 0) -> CriterionResult:
    rng = random.Random(seed)
    budget = CoverBudget(max_members=20, max_join_elements=20_000, max_nodes=200_000)
    counts = {"refinement": 0, "join": 0, "preimage": 0, "surjective_equality": 0, "series": 0}
    failures, skipped = [], 0
    for i in range(200):
        U, V = random_cover(rng), random_cover(rng)
        f = corpus.random_perfect_map(rng)
        try:
            nU, nV = minimal_subcover_count(U, budget), minimal_subcover_count(V, budget)
            W = join(U, V, budget)
            nW = minimal_subcover_count(W, budget)
            if not (refines(U, W) and nW >= nU):
                failures.append({"case": i, "property": "refinement"})
            counts["refinement"] += 1
            if nW > nU * nV:
                failures.append({"case": i, "property": "join"})
            counts["join"] += 1
            nP = minimal_subcover_count(preimage_cover(f, U), budget)
            if nP > nU:
                failures.append({"case": i, "property": "preimage"})
            counts["preimage"] += 1
            if is_surjective(f):
                if nP != nU:
                    failures.append({"case": i, "property": "surjective_equality"})
                counts["surjective_equality"] += 1
            series = cover_entropy_sequence(f, U, 4, budget)
            if series.subadditivity_violations():
                failures.append({"case": i, "property": "series"})
            counts["series"] += 1
        except BudgetExceeded:
            skipped += 1
    return CriterionResult(6, "cover refinement, join, preimage and subadditivity on 200 random cases", not failures,
                           {"checked": counts, "budget_skipped": skipped, "failures": failures})


def criterion_7(seed: int = 0) -> CriterionResult:
    uniform = MarkovMeasure(np.full(3, 1 / 3), np.full((3, 3), 1 / 3))
    h_mu = markov_entropy(uniform).value
    h_spec = spectral_entropy(np.ones((3, 3), dtype=int)).value
    h_lap = lap_entropy(corpus.example_truncated(1), 10).value
    closed = abs(h_mu - LN3) <= 1e-9 and abs(h_spec - h_mu) <= 1e-9 and abs(h_lap - h_mu) <= 0.02
    rng = np.random.default_rng(seed)
    worst, violations = -math.inf, 0
    for _ in range(100):
        k = int(rng.integers(2, 7))
        support = random_support(rng, k, float(rng.uniform(0.3, 0.9)))
        mu = random_markov_measure(rng, support)
        gap = markov_entropy(mu).value - spectral_entropy(support).value
        worst = max(worst, gap)
        violations += gap > 1e-9
    return CriterionResult(7, "Markov entropy vs spectral radius", closed and violations == 0, {
        "uniform_3_shift": h_mu, "spectral_all_ones": h_spec, "lap_three_branch": h_lap,
        "random_measures": 100, "violations": violations, "max_h_minus_log_rho": worst,
    })


def _ball_cover_instance(rng: random.Random) -> tuple[list[Fraction], tuple[Fraction, Fraction]]:
    """Centers evenly spread in angle on the circle and a radius range that covers it."""
    k = rng.randint(4, 12)
    phase = rng.uniform(0, 2 * math.pi / k)
    centers = []
    for j in range(k):
        theta = phase + 2 * math.pi * j / k - math.pi  # in [-pi, pi)
        if abs(abs(theta) - math.pi) < 1e-3:
            theta = math.copysign(math.pi - 1e-3, theta)
        centers.append(Fraction(math.tan(theta / 2)).limit_denominator(1000))
    a = Fraction(2.1 * math.sin(math.pi / k)).limit_denominator(1000)
    b = a + Fraction(rng.randint(1, 20), 100)
    return centers, (a, b)


def criterion_8(seed: int = 0) -> CriterionResult:
    rng = random.Random(seed)
    m = CompactTypeMetric()
    rows = []
    for i in range(20):
        centers, (a, b) = _ball_cover_instance(rng)
        delta, cover = cocompactify_ball_cover(m, centers, (a, b))
        ok = (len(cover) == len(centers) and is_cover(cover.members)
              and all(s.complement.bounded for s in cover.members) and a < delta < b
              and all(m.squared(c, X_INF) != delta * delta for c in centers))
        rows.append({"case": i, "balls": len(centers), "delta": str(delta), "ok": ok})
    return CriterionResult(8, "ball covers become co-compact covers of equal size",
                           all(r["ok"] for r in rows), {"rows": rows})


def criterion_9(seed: int = 0) -> CriterionResult:
    rng = random.Random(seed)
    bases = [(corpus.example_truncated(1), verified(corpus.example_truncated(1), _example_certificate())),
             (corpus.tent_extended(), search(corpus.tent_extended(), 3))]
    while len(bases) < 5:
        f = corpus.random_perfect_map(rng)
        cert = search(f, 2)
        if cert is not None:
            bases.append((f, cert))
    rows = []
    for i in range(20):
        f, cert = bases[i % len(bases)]
        a = Fraction(rng.choice([-1, 1]) * rng.randint(1, 6), rng.randint(1, 4))
        b = Fraction(rng.randint(-12, 12), rng.randint(1, 4))
        g, image = conjugate_certificate(f, cert, a, b)
        same_laps = list(iterate_lap_counts(f, 4)) == list(iterate_lap_counts(g, 4))
        ok = image.verified and (image.n, image.p) == (cert.n, cert.p) and same_laps
        rows.append({"case": i, "a": str(a), "b": str(b), "n": image.n, "p": image.p, "ok": ok})
    return CriterionResult(9, "affine conjugation preserves certificates and lap counts",
                           all(r["ok"] for r in rows), {"rows": rows})


CRITERIA: dict[int, Callable[[int], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}


def dumps(results: list[CriterionResult], seed: int) -> str:
    doc = {"seed": seed, "results": [asdict(r) for r in results],
           "passed": all(r.passed for r in results)}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def criterion_10(seed: int = 0, first: list[CriterionResult] | None = None) -> CriterionResult:
    """Rerun criteria 1-9 and compare the serialized reports byte for byte."""
    if first is None:
        first = [CRITERIA[k](seed) for k in sorted(CRITERIA)]
    second = [CRITERIA[k](seed) for k in sorted(CRITERIA)]
    same = dumps(first, seed) == dumps(second, seed)
    return CriterionResult(10, "reports are byte-identical across runs", same, {"identical": same})


def run_suite(seed: int = 0, numbers=None) -> list[CriterionResult]:
    numbers = sorted(numbers) if numbers else list(range(1, 11))
    results = [CRITERIA[k](seed) for k in numbers if k in CRITERIA]
    if 10 in numbers:
        first = results if len(results) == len(CRITERIA) else None
        results.append(criterion_10(seed, first))
    return results
