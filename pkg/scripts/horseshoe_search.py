"""Horseshoe search on corpus and random maps, compared with lap entropy."""
import argparse
import random

from cocompact import corpus
from cocompact.entropy import lap_entropy
from cocompact.errors import BudgetExceeded
from cocompact.horseshoe import search


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=4)
    ap.add_argument("--random", type=int, default=10, help="number of random maps")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    maps = dict(corpus.named_corpus())
    rng = random.Random(args.seed)
    for i in range(args.random):
        maps[f"random-{i}"] = corpus.random_perfect_map(rng)

    print(f"{'map':<18} {'lap h':>7} {'n':>3} {'p':>5} {'log p / n':>10}")
    for name, f in maps.items():
        h = lap_entropy(f, 10).value
        try:
            cert = search(f, args.n_max)
        except BudgetExceeded:
            print(f"{name:<18} {h:7.4f}  budget exceeded")
            continue
        if cert is None:
            print(f"{name:<18} {h:7.4f} {'-':>3} {'-':>5} {'-':>10}")
        else:
            print(f"{name:<18} {h:7.4f} {cert.n:3d} {cert.p:5d} {cert.rate:10.4f}")


if __name__ == "__main__":
    main()
