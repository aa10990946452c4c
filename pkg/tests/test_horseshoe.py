import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cocompact import corpus
from cocompact.errors import (DegenerateInterval, InvalidCertificate, NotAChain, NotPerfect, OverlappingIntervals,
                              SpecError)
from cocompact.horseshoe import (HorseshoeCertificate, IntervalChain, conjugate_certificate, entropy_lower_bound,
                                 itinerary_point, refine_chain, search, verified, verify)
from cocompact.intervals import INF, NEG_INF, Interval
from cocompact.plmap import PLMap, count_iterate_laps, image_interval, iterate
from oracles import image_of_interval, lap_count_oracle
from strategies import nonzero_rationals, perfect_maps, rationals, seeds

EXAMPLE = corpus.example_truncated(1)
J1, J2 = Interval(0, F(1, 3)), Interval(F(2, 3), 1)
CERT = HorseshoeCertificate(1, (J1, J2))


def oracle_is_horseshoe(f, cert):
    lo = min(iv.lo for iv in cert.intervals)
    hi = max(iv.hi for iv in cert.intervals)
    for J in cert.intervals:
        a, b = image_of_interval(f, cert.n, J.lo, J.hi)
        if not (a <= lo and hi <= b):
            return False
    return True


def test_verify_examples():
    assert verify(EXAMPLE, CERT)
    assert oracle_is_horseshoe(EXAMPLE, CERT)
    assert not verify(corpus.doubling(), HorseshoeCertificate(1, (Interval(0, 1), Interval(2, 3))))


@pytest.mark.parametrize("intervals, error", [
    ((Interval(0, F(1, 2)), Interval(F(1, 2), 1)), OverlappingIntervals),
    ((Interval(0, 0), Interval(1, 2)), DegenerateInterval),
    ((Interval(0, 1),), InvalidCertificate),
    ((Interval(0, 1), Interval(2, INF)), InvalidCertificate),
])
def test_verify_rejects_malformed(intervals, error):
    with pytest.raises(error):
        verify(EXAMPLE, HorseshoeCertificate(1, intervals))


def test_verify_needs_perfect_map():
    with pytest.raises(NotPerfect):
        verify(PLMap([0], [(1, 0), (0, 0)]), CERT)


def test_certificate_json():
    cert = verified(EXAMPLE, CERT)
    doc = cert.to_json()
    assert doc == {"n": 1, "intervals": [["0", "1/3"], ["2/3", "1"]], "verified": True}
    back = HorseshoeCertificate.from_json(cert.dumps())
    assert back.intervals == CERT.intervals and not back.verified


@pytest.mark.parametrize("text", [
    "{", '{"n": 0, "intervals": []}', '{"n": 1}', '{"n": 1, "intervals": [["0", "2/4"]]}',
    '{"n": 1, "intervals": [[0, 1]]}', '{"n": 1, "intervals": [["1", "0"]]}', '{"n": true, "intervals": []}',
])
def test_certificate_json_errors(text):
    with pytest.raises(SpecError):
        HorseshoeCertificate.from_json(text)


def test_lower_bound_examples():
    assert entropy_lower_bound(verified(EXAMPLE, CERT)).value == pytest.approx(math.log(2))
    fake = [HorseshoeCertificate(3, tuple(Interval(2 * k, 2 * k + 1) for k in range(4)), True),
            HorseshoeCertificate(2, (J1, J2), True)]
    assert entropy_lower_bound(fake[0]).value == pytest.approx(math.log(4) / 3)
    assert entropy_lower_bound(fake[1]).value == pytest.approx(math.log(2) / 2)
    assert entropy_lower_bound(fake[0]).direction == "lower-bound"
    with pytest.raises(InvalidCertificate):
        entropy_lower_bound(CERT)


def test_search_examples():
    cert = search(EXAMPLE, 1)
    assert cert.intervals == (J1, J2) and cert.verified
    assert entropy_lower_bound(cert).value == pytest.approx(math.log(2))
    assert search(corpus.doubling(), 4) is None
    assert search(corpus.identity(), 3) is None


def test_search_tent_third_iterate():
    cert = search(corpus.tent_extended(), 3)
    assert cert.n == 3 and cert.p >= 4
    assert cert.rate >= math.log(4) / 3
    assert oracle_is_horseshoe(corpus.tent_extended(), cert)


def test_search_stops_at_target():
    cert = search(EXAMPLE, 5, lambda_target=0.5)
    assert cert.n == 1


@pytest.mark.parametrize("f, lam", [(corpus.tent_extended(), 0.5), (EXAMPLE, 0.5), (EXAMPLE, 0.3),
                                    (corpus.tent_extended(), 0.3)])
def test_search_reaches_rate(f, lam):
    cert = search(f, 8, lam)
    assert cert.rate >= lam - 0.2


@settings(max_examples=40)
@given(perfect_maps)
def test_search_is_sound(f):
    cert = search(f, 2)
    if cert is None:
        return
    assert oracle_is_horseshoe(f, cert)
    if cert.n * 2 <= 4:
        assert lap_count_oracle(f, cert.n * 2) >= cert.p ** 2
    for k in range(1, 5):
        assert count_iterate_laps(f, cert.n * k, stop_at=cert.p ** k) >= cert.p ** k


@given(nonzero_rationals, rationals)
def test_affine_equivariance(a, b):
    g, cert = conjugate_certificate(EXAMPLE, verified(EXAMPLE, CERT), a, b)
    assert (cert.n, cert.p) == (1, 2) and cert.verified
    assert oracle_is_horseshoe(g, cert)


def test_refine_chain_examples():
    assert refine_chain(EXAMPLE, IntervalChain((J1, J2))) == Interval(F(2, 9), F(1, 3))
    assert refine_chain(corpus.identity(), IntervalChain((J1, J1))) == J1
    with pytest.raises(NotAChain):
        refine_chain(EXAMPLE, IntervalChain((J1, Interval(2, 3))))
    with pytest.raises(NotAChain):
        refine_chain(EXAMPLE, IntervalChain(()))


def test_refine_chain_unbounded():
    K = refine_chain(corpus.doubling(), IntervalChain((Interval(NEG_INF, INF), Interval(0, 1))))
    assert K == Interval(0, F(1, 2))
    K = refine_chain(corpus.tent_extended(), IntervalChain((Interval(1, INF), Interval(5, INF))))
    assert K == Interval(F(7, 2), INF)


def _random_chain(rng, f, cert):
    length = rng.randint(2, 4)
    return IntervalChain(tuple(cert.intervals[rng.randrange(cert.p)] for _ in range(length)))


@settings(max_examples=100)
@given(seeds)
def test_refine_chain_postconditions(seed):
    rng = random.Random(seed)
    f, cert = EXAMPLE, CERT
    if rng.random() < 0.5:
        g = corpus.random_perfect_map(rng)
        found = search(g, 1)
        if found is not None:
            f, cert = g, found
    chain = _random_chain(rng, f, cert)
    K = refine_chain(f, chain)
    assert chain.intervals[0].contains_interval(K)
    for i, J in enumerate(chain.intervals[1:], start=1):
        a, b = image_of_interval(f, i, K.lo, K.hi)
        assert J.lo <= a and b <= J.hi
    last = len(chain) - 1
    assert image_of_interval(f, last, K.lo, K.hi) == (chain.intervals[-1].lo, chain.intervals[-1].hi)


def test_itinerary_fixed_point():
    cert = verified(EXAMPLE, CERT)
    it = itinerary_point(EXAMPLE, cert, [1] * 6)
    for k, K in enumerate(it.intervals):
        assert 0 in K
        assert K.width == F(1, 3) / 3 ** k


def test_itinerary_period_two():
    cert = verified(EXAMPLE, CERT)
    it = itinerary_point(EXAMPLE, cert, [1, 2] * 4)
    assert all(F(1, 4) in K for K in it.intervals)
    assert it.interval.width == F(1, 3) / 3 ** 7
    assert abs(it.midpoint - F(1, 4)) < F(1, 3 ** 8)


@given(st.lists(st.integers(1, 2), min_size=1, max_size=7))
def test_itinerary_nested(word):
    cert = verified(EXAMPLE, CERT)
    it = itinerary_point(EXAMPLE, cert, word)
    assert cert.intervals[word[0] - 1].contains_interval(it.intervals[0])
    for outer, inner in zip(it.intervals, it.intervals[1:]):
        assert outer.contains_interval(inner) and not inner.degenerate
    K = it.interval
    for j, s in enumerate(word):
        img = image_interval(iterate(EXAMPLE, j), K) if j else K
        assert cert.intervals[s - 1].contains_interval(img)


def test_itinerary_errors():
    with pytest.raises(InvalidCertificate):
        itinerary_point(EXAMPLE, CERT, [1])
    with pytest.raises(ValueError):
        itinerary_point(EXAMPLE, verified(EXAMPLE, CERT), [3])
