import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cocompact import corpus
from cocompact.entropy import (CountSeries, EntropyEstimate, MarkovMeasure, TransitionMatrix, bowen_counts,
                               convert_log, cylinder_entropy, greedy_separated, hd_estimate, lap_entropy,
                               lap_series, markov_entropy, metric_distance, orbit_table, phi, random_markov_measure,
                               random_support, spectral_entropy, spectral_radius, transition_matrix)
from cocompact.errors import BudgetExceeded, GridTooCoarse, InvalidMeasure, NotPerfect
from cocompact.intervals import Interval
from cocompact.plmap import PLMap, iterate
from oracles import (chord, greedy_separated_bruteforce, markov_cylinder_entropy, max_separated_exhaustive,
                     spectral_radius_dense)
from strategies import perfect_maps

UNIT = Interval(0, 1)


def euclid(a, b):
    return abs(a - b)


def circle(a, b):
    return chord(a, b)


def test_estimate_validates_fields():
    with pytest.raises(ValueError):
        EntropyEstimate(-0.1, "lap-growth", "estimate")
    with pytest.raises(ValueError):
        EntropyEstimate(0.1, "guess", "estimate")
    est = EntropyEstimate(math.log(2), "lap-growth", "estimate")
    assert est.to_json("2")["value"] == pytest.approx(1.0)
    assert convert_log(math.log(10), "10") == pytest.approx(1.0)


def test_count_series_csv():
    s = CountSeries("laps", [1, 2], [3, 9], "exact")
    lines = s.to_csv().splitlines()
    assert lines[0] == "n,count,log_count"
    assert lines[2].startswith("2,9,2.197")
    assert s.slope == pytest.approx(math.log(9) / 2)


# Bowen counts

def test_identity_separated_count_constant():
    spanning, separated = bowen_counts(corpus.identity(), "euclid", UNIT, 0.25, 6, 1 / 64)
    # greedy picks 0, 17/64, 34/64, 51/64 on this grid
    assert separated.counts == [4] * 6
    assert spanning.counts == separated.counts
    assert (spanning.direction, separated.direction) == ("upper-bound", "lower-bound")


def test_doubling_separated_growth():
    _, sep = bowen_counts(corpus.doubling(), "euclid", UNIT, 0.25, 8, 1 / 16384)
    assert sep.counts[1] >= 4
    assert abs(sep.slope - math.log(2)) <= 0.05


@pytest.mark.parametrize("metric, dist", [("euclid", euclid), ("circle", circle)])
@pytest.mark.parametrize("seed", range(6))
def test_greedy_matches_bruteforce(metric, dist, seed):
    f = corpus.random_perfect_map(__import__("random").Random(seed))
    xs = np.linspace(-2, 2, 81)
    orbits = orbit_table(f, xs, 4)
    rows = [list(r) for r in orbits]
    assert greedy_separated(orbits, metric, 0.3) == greedy_separated_bruteforce(rows, dist, 0.3)


@pytest.mark.parametrize("metric, dist", [("euclid", euclid), ("circle", circle)])
def test_greedy_is_separated_spanning_and_below_maximum(metric, dist):
    f = corpus.tent_extended()
    xs = np.linspace(0, 1, 13)
    orbits = orbit_table(f, xs, 3)
    chosen = greedy_separated(orbits, metric, 0.3)
    rows = [list(r) for r in orbits]

    def d(i, j):
        return max(dist(a, b) for a, b in zip(rows[i], rows[j]))
    assert all(d(i, j) > 0.3 for i in chosen for j in chosen if i < j)
    assert all(any(d(i, j) <= 0.3 for j in chosen) for i in range(len(rows)))
    assert len(chosen) <= max_separated_exhaustive(rows, dist, 0.3)


def test_metric_distance_matches_chord():
    x = np.array([0.0, 1.0, -3.0, 1e6])
    y = np.array([0.0, -1.0, 2.5, -1e6])
    got = metric_distance("circle", x, y)
    assert got == pytest.approx([chord(a, b) for a, b in zip(x, y)], abs=1e-9)
    assert metric_distance("euclid", np.array([np.inf]), np.array([np.inf]))[0] == 0


def test_grid_too_coarse():
    with pytest.raises(GridTooCoarse):
        bowen_counts(corpus.doubling(), "euclid", UNIT, 0.25, 3, 1 / 8)


@settings(max_examples=10)
@given(perfect_maps)
def test_separated_nonincreasing_in_eps(f):
    K = Interval(-1, 1)
    _, big = bowen_counts(f, "euclid", K, 0.5, 4, 1 / 256)
    _, small = bowen_counts(f, "euclid", K, 0.25, 4, 1 / 256)
    assert all(a <= b for a, b in zip(big.counts, small.counts))


def test_hd_estimates():
    windows = [UNIT]
    ident = hd_estimate(corpus.identity(), "euclid", windows, [0.25], 12, 1 / 1024)
    assert ident.value == pytest.approx(0, abs=0.02)
    dbl = hd_estimate(corpus.doubling(), "euclid", windows, [0.5, 0.25], 8, 1 / 16384)
    assert dbl.value >= math.log(2) - 0.05
    circ = hd_estimate(corpus.doubling(), "circle", windows, [0.25], 24, 1 / 16384)
    assert circ.value <= 0.05
    assert circ.params["window_limited"]


# lap growth

def test_lap_entropy_examples():
    assert lap_entropy(corpus.doubling(), 8).value == 0
    assert lap_entropy(corpus.full_three_branch(), 10).value == pytest.approx(math.log(3), abs=1e-6)
    assert lap_entropy(corpus.tent_extended(), 12).value == pytest.approx(math.log(2), abs=0.02)
    with pytest.raises(NotPerfect):
        lap_entropy(PLMap([0], [(1, 0), (0, 0)]), 3)


def test_lap_series_budget_truncation():
    series = lap_series(corpus.tent_extended(), 20, budget=100)
    assert series.params["budget_truncated"]
    assert 2 <= len(series.counts) < 20
    with pytest.raises(BudgetExceeded):
        lap_series(corpus.tent_extended(), 20, budget=1)


@pytest.mark.parametrize("f", [corpus.tent_extended(), corpus.example_truncated(1)])
@pytest.mark.parametrize("m", [2, 3])
def test_power_rule(f, m):
    base = lap_entropy(f, 12).value
    assert lap_entropy(iterate(f, m), 12 // m + 2).value == pytest.approx(m * base, abs=0.02)


# transition matrices

def test_transition_matrix_examples():
    three = [Interval(0, F(1, 3)), Interval(F(2, 5), F(3, 5)), Interval(F(2, 3), 1)]
    # the middle piece maps onto [1/5, 4/5], which holds only the middle interval
    assert transition_matrix(corpus.full_three_branch(), three).matrix.tolist() == [[1, 1, 1], [0, 1, 0], [1, 1, 1]]
    two = [Interval(0, F(1, 3)), Interval(F(2, 3), 1)]
    assert transition_matrix(corpus.example_truncated(1), two).matrix.tolist() == [[1, 1], [1, 1]]
    assert transition_matrix(corpus.identity(), [Interval(0, 1)]).matrix.tolist() == [[1]]
    assert transition_matrix(PLMap.linear(F(1, 2)), [Interval(1, 2)]).matrix.tolist() == [[0]]
    with pytest.raises(ValueError):
        transition_matrix(corpus.identity(), [Interval(0, 1), Interval(1, 2)])


def test_spectral_entropy_examples():
    assert spectral_entropy(np.ones((2, 2))).value == pytest.approx(math.log(2), abs=1e-10)
    assert spectral_entropy(np.ones((3, 3))).value == pytest.approx(math.log(3), abs=1e-10)
    assert spectral_entropy(np.array([[1]])).value == 0
    assert spectral_entropy(np.array([[0, 1], [0, 0]])).value == 0


@pytest.mark.parametrize("p", range(1, 7))
def test_spectral_all_ones(p):
    assert spectral_entropy(np.ones((p, p))).value == pytest.approx(math.log(p), abs=1e-10)


@given(st.integers(0, 10_000), st.integers(1, 7))
def test_spectral_radius_matches_eigvals(seed, k):
    M = random_support(np.random.default_rng(seed), k)
    assert spectral_radius(M) == pytest.approx(spectral_radius_dense(M), rel=1e-8, abs=1e-9)


def test_restriction_inequality_on_example():
    f = corpus.example_truncated(1)
    M = transition_matrix(f, [Interval(0, F(1, 3)), Interval(F(2, 3), 1)])
    assert spectral_entropy(M, covering=True).value <= lap_entropy(f, 10).value + 0.02


# Markov measures

def test_phi():
    assert phi(0) == 0
    assert phi(1) == 0
    assert phi(0.5) == pytest.approx(math.log(2) / 2)
    with pytest.raises(ValueError):
        phi(1.5)


def test_markov_examples():
    assert markov_entropy(MarkovMeasure([0.5, 0.5], np.full((2, 2), 0.5))).value == pytest.approx(math.log(2))
    perm = MarkovMeasure([0.5, 0.5], [[0, 1], [1, 0]])
    assert markov_entropy(perm).value == pytest.approx(0, abs=1e-12)
    three = MarkovMeasure(np.full(3, 1 / 3), np.full((3, 3), 1 / 3))
    assert markov_entropy(three).value == pytest.approx(math.log(3), abs=1e-9)


def test_markov_rejects_bad_measures():
    with pytest.raises(InvalidMeasure):
        MarkovMeasure([0.5, 0.5], [[0.5, 0.4], [0.5, 0.5]])
    with pytest.raises(InvalidMeasure):
        MarkovMeasure([0.9, 0.1], [[0.5, 0.5], [0.5, 0.5]])
    with pytest.raises(InvalidMeasure):
        MarkovMeasure([0.5, 0.5], np.full((2, 2), 0.5), TransitionMatrix.from_array([[1, 0], [1, 1]]))


@settings(max_examples=30)
@given(st.integers(0, 10_000), st.integers(1, 4), st.integers(1, 4))
def test_cylinder_entropy_matches_enumeration(seed, k, n):
    rng = np.random.default_rng(seed)
    mu = random_markov_measure(rng, random_support(rng, k))
    assert cylinder_entropy(mu, n) == pytest.approx(markov_cylinder_entropy(mu.p, mu.P, n), abs=1e-9)


@settings(max_examples=100)
@given(st.integers(0, 10_000), st.integers(1, 6))
def test_one_sided_variational_principle(seed, k):
    rng = np.random.default_rng(seed)
    support = random_support(rng, k)
    mu = random_markov_measure(rng, support)
    assert markov_entropy(mu).value <= math.log(max(spectral_radius_dense(support), 1)) + 1e-9
