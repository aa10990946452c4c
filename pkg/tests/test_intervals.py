from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cocompact.intervals import INF, NEG_INF, Interval, IntervalUnion, format_rational, parse_rational
from strategies import rationals


def test_parse_rational_strict_rejects_noncanonical():
    assert parse_rational("2/3") == F(2, 3)
    assert parse_rational("-7") == -7
    for bad in ("2/4", "3/1", "-0", "1/-2", "0.5", "+1"):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_format_round_trip_and_infinities():
    assert format_rational(F(-5, 3)) == "-5/3"
    assert format_rational(INF) == "inf"
    assert format_rational(NEG_INF) == "-inf"


@given(rationals)
def test_format_parse_round_trip(q):
    assert parse_rational(format_rational(q)) == q


def test_interval_rejects_empty_and_bad_infinities():
    with pytest.raises(ValueError):
        Interval(1, 0)
    with pytest.raises(ValueError):
        Interval(INF, INF)
    assert not Interval(0, INF).bounded
    assert Interval(F(1, 2), F(1, 2)).degenerate


def test_union_merges_touching_pieces():
    u = IntervalUnion.from_pairs([(2, 3), (0, 1), (1, F(3, 2))])
    assert u.intervals == (Interval(0, F(3, 2)), Interval(2, 3))
    assert u.hull() == Interval(0, 3)


@given(st.lists(st.tuples(rationals, rationals), max_size=5),
       st.lists(st.tuples(rationals, rationals), max_size=5), rationals)
def test_union_and_intersection_pointwise(a, b, x):
    ua = IntervalUnion.from_pairs(sorted(p) for p in a)
    ub = IntervalUnion.from_pairs(sorted(p) for p in b)
    assert (x in ua.union(ub)) == (x in ua or x in ub)
    assert (x in ua.intersection(ub)) == (x in ua and x in ub)
    assert ua.intersection(ub).issubset(ua)
