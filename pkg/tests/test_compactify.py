import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cocompact import corpus
from cocompact.compactify import (X_INF, CompactTypeMetric, EndpointBehavior, NoWrappingBall, UnitIntervalMap,
                                  ball_trace, classify_endpoints, cocompactify_ball_cover, conjugate, extend, h,
                                  metric_eval, one_point_extension)
from cocompact.covers import is_cover
from cocompact.errors import NonDivergent, NotACover, NotPerfect
from cocompact.plmap import PLMap
from oracles import chord
from strategies import rationals

D = CompactTypeMetric()
CORPUS = corpus.named_corpus()
points = st.one_of(rationals, st.just(X_INF))
radii = st.builds(F, st.integers(1, 260), st.just(100))


def as_oracle(x):
    return None if x == X_INF else x


def test_h_examples():
    assert h(0) == 0.5
    xs = [-1e6, -3, -F(1, 2), 0, F(1, 3), 2, 1e6]
    vals = [h(x) for x in xs]
    assert all(0 < v < 1 for v in vals)
    assert vals == sorted(vals) and len(set(vals)) == len(vals)


def test_conjugate_and_extend_examples():
    g = extend(conjugate(corpus.doubling()))
    assert g.behavior is EndpointBehavior.A3 and (g(0), g(1)) == (0, 1)
    g = extend(conjugate(corpus.negated_doubling()))
    assert g.behavior is EndpointBehavior.A4 and (g(0), g(1)) == (1, 0)
    g = extend(conjugate(PLMap([0], [(-1, 0), (1, 0)])))
    assert g.behavior is EndpointBehavior.A2 and (g(0), g(1)) == (1, 1)
    assert classify_endpoints(PLMap([0], [(1, 0), (-1, 0)])) is EndpointBehavior.A1


def test_extension_errors():
    flat = PLMap([5], [(1, 0), (0, 5)])
    assert classify_endpoints(flat) is EndpointBehavior.NON_DIVERGENT
    with pytest.raises(NotPerfect):
        conjugate(flat)
    with pytest.raises(NonDivergent):
        extend(UnitIntervalMap(flat, EndpointBehavior.NON_DIVERGENT))
    with pytest.raises(ValueError):
        conjugate(corpus.doubling())(0)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_semiconjugacy(name):
    g = conjugate(CORPUS[name])
    rng = random.Random(7)
    for _ in range(1000):
        x = F(rng.randint(-2000, 2000), rng.randint(1, 50))
        assert g.semiconjugacy_error(x) <= 1e-12


def test_endpoints_preimage_invariant():
    g = extend(conjugate(corpus.tent_extended()))
    assert {g(0), g(1)} <= {0.0, 1.0}
    # interior points never reach the ends
    assert all(0 < g(t) < 1 for t in (1e-9, 0.3, 0.5, 0.7, 1 - 1e-9))


def test_one_point_extension():
    f = one_point_extension(corpus.doubling())
    assert f(X_INF) == X_INF and f(F(3)) == 6


def test_metric_examples():
    assert metric_eval(D, 0, X_INF) == 2
    assert D(F(5, 3), F(5, 3)) == 0
    assert D(1, -1) == pytest.approx(2)
    assert D(X_INF, -math.inf) == 0


@given(points, points, points)
def test_metric_axioms(x, y, z):
    assert D(x, y) == D(y, x)
    assert 0 <= D(x, y) <= 2
    assert (D(x, y) == 0) == (x == y)
    assert D(x, z) <= D(x, y) + D(y, z) + 1e-12


@given(points, points)
def test_metric_matches_chord_and_exact_square(x, y):
    assert D(x, y) == pytest.approx(chord(as_oracle(x), as_oracle(y)), abs=1e-12)
    assert float(D.squared(x, y)) == pytest.approx(D(x, y) ** 2, abs=1e-12)


def test_ball_trace_examples():
    t = ball_trace(D, 0, F(1, 2))
    assert t.kind == "bounded" and t.lo == pytest.approx(-float(t.hi))
    assert ball_trace(D, 0, F(21, 10)).wraps
    # radius 2 at the origin: x_inf lies on the sphere, so the ball is not co-compact
    t = ball_trace(D, 0, 2)
    assert t.kind == "boundary" and not t.wraps


@given(rationals, radii, rationals)
def test_ball_trace_dichotomy(c, delta, y):
    t = ball_trace(D, c, delta)
    to_inf = D(c, X_INF)
    if to_inf < delta:
        assert t.wraps
        assert t.cocompact.complement.bounded
    elif to_inf > delta:
        assert t.kind == "bounded"
    # membership agrees with the distance away from the sphere
    dist = chord(c, y)
    inside = y not in t.complement()
    if dist < float(delta) - 1e-9:
        assert inside
    elif dist > float(delta) + 1e-9:
        assert not inside


def test_ball_cover_example():
    delta, U = cocompactify_ball_cover(D, [0, 10], (F(205, 100), F(22, 10)))
    assert F(205, 100) < delta < F(22, 10)
    assert len(U) == 2 and is_cover(U.members)
    assert all(m.complement.bounded for m in U)


def test_all_wrapping_balls_are_kept():
    delta, U = cocompactify_ball_cover(D, [0, 1, -1], (F(21, 10), F(22, 10)))
    assert [m for m in U] == [ball_trace(D, c, delta).cocompact for c in (0, 1, -1)]


def test_ball_cover_errors():
    with pytest.raises(NotACover):
        cocompactify_ball_cover(D, [0], (F(1, 10), F(1, 5)))
    with pytest.raises(NoWrappingBall):
        # the only candidate radius puts x_inf on the sphere around 0
        cocompactify_ball_cover(D, [0], (1, 3), candidates=1)


@given(st.lists(st.builds(F, st.integers(-40, 40), st.integers(1, 4)), min_size=1, max_size=5))
def test_ball_cover_properties(centers):
    centers = [F(0)] + centers
    delta, U = cocompactify_ball_cover(D, centers, (F(201, 100), F(3)))
    assert len(U) == len(centers)
    assert is_cover(U.members)
    assert all(m.complement.bounded for m in U)
    assert all(D.squared(c, X_INF) != delta * delta for c in centers)
