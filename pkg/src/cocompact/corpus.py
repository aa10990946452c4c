"""Built-in maps and a seeded generator of random perfect PL maps."""
from __future__ import annotations

import random
from fractions import Fraction

from .errors import SpecError
from .plmap import PLMap, load_map

F = Fraction


def identity() -> PLMap:
    return PLMap.identity()


def doubling() -> PLMap:
    return PLMap.linear(2, 0)


def negated_doubling() -> PLMap:
    return PLMap.linear(-2, 0)


def tent_extended() -> PLMap:
    """2x on (-inf, 1/2], 2 - 2x on [1/2, 1], 2x - 2 on [1, inf)."""
    return PLMap([F(1, 2), F(1)], [(2, 0), (-2, 2), (2, -2)])


def example_truncated(m: int = 1) -> PLMap:
    """The three-branch map ``3x - 2n`` / ``-3x + 4n + 2`` / ``3x - 2n - 2`` on each
    ``[n, n+1]`` for ``0 <= n < m``, extended by slope-3 lines outside ``[0, m]``.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    bps, segs = [], [(F(3), F(0))]
    for n in range(m):
        bps += [n + F(1, 3), n + F(2, 3)]
        segs += [(F(-3), F(4 * n + 2)), (F(3), F(-2 * n - 2))]
    return PLMap(bps, segs)


def full_three_branch() -> PLMap:
    """Slopes 3, -3, 3 with diverging ends; coincides with ``example_truncated(1)``."""
    return example_truncated(1)


def random_perfect_map(rng: random.Random, max_breakpoints: int = 3, span: int = 2,
                       denominator: int = 4) -> PLMap:
    """Random perfect PL map with nonzero slopes everywhere.

    Breakpoints and breakpoint values are drawn from ``{k/denominator}`` in
    ``[-span, span]``; end slopes from ``{±1, ±2, ±3}``.
    """
    grid = [F(k, denominator) for k in range(-span * denominator, span * denominator + 1)]
    while True:
        k = rng.randint(1, max_breakpoints)
        bps = sorted(rng.sample(grid, k))
        vals = [rng.choice(grid) for _ in bps]
        if any(a == b for a, b in zip(vals, vals[1:])):
            continue
        left = rng.choice([-3, -2, -1, 1, 2, 3])
        right = rng.choice([-3, -2, -1, 1, 2, 3])
        return PLMap.from_values(bps, vals, left, right)


NAMES = ("identity", "doubling", "negated-doubling", "tent-extended", "example5", "full-3-branch")


def corpus_map(name: str, m: int = 1) -> PLMap:
    table = {
        "identity": identity,
        "doubling": doubling,
        "negated-doubling": negated_doubling,
        "tent-extended": tent_extended,
        "full-3-branch": full_three_branch,
    }
    if name == "example5":
        return example_truncated(m)
    if name in table:
        return table[name]()
    if name.startswith("random-"):
        seed = int(name.split("-", 1)[1])
        return random_perfect_map(random.Random(seed))
    raise SpecError(f"unknown corpus map {name!r}; known: {', '.join(NAMES)}, random-<seed>")


def resolve_map(source: str, m: int = 1) -> PLMap:
    """``corpus:<name>`` or a path to a map-spec JSON file."""
    if source.startswith("corpus:"):
        return corpus_map(source[len("corpus:"):], m)
    try:
        return load_map(source)
    except OSError as exc:
        raise SpecError(f"cannot read map file {source!r}: {exc.strerror}") from None


def named_corpus() -> dict[str, PLMap]:
    """Every fixed corpus entry, with the truncated three-branch map for m in 1..3."""
    out = {
        "identity": identity(),
        "doubling": doubling(),
        "negated-doubling": negated_doubling(),
        "tent-extended": tent_extended(),
    }
    for m in (1, 2, 3):
        out[f"example5-m{m}"] = example_truncated(m)
    return out
