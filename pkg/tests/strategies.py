import random
from fractions import Fraction

from hypothesis import strategies as st

from cocompact import corpus
from cocompact.covers import random_cover

rationals = st.builds(Fraction, st.integers(-400, 400), st.integers(1, 16))
seeds = st.integers(0, 10_000)
perfect_maps = seeds.map(lambda s: corpus.random_perfect_map(random.Random(s)))
small_covers = seeds.map(lambda s: random_cover(random.Random(s)))
nonzero_rationals = st.builds(Fraction, st.integers(1, 12), st.integers(1, 6)).flatmap(
    lambda q: st.sampled_from([q, -q]))
