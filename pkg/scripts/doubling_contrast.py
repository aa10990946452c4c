"""Cover entropy vs Bowen entropy for x -> 2x.

Co-compact cover counts grow only linearly (entropy 0), Euclidean separated
counts double each step, and chord-metric counts stay bounded.
"""
import argparse
import math

from cocompact import corpus
from cocompact.covers import CoCompactCover, CoCompactSet, cover_entropy_sequence
from cocompact.entropy import bowen_counts
from cocompact.intervals import Interval


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=8)
    ap.add_argument("--eps", type=float, default=0.25)
    ap.add_argument("--grid-step", type=float, default=1 / 16384)
    args = ap.parse_args()

    f = corpus.doubling()
    U = CoCompactCover.of(CoCompactSet.minus((-1, 1)), CoCompactSet.minus((2, 4)))
    cover = cover_entropy_sequence(f, U, args.n_max)
    K = Interval(0, 1)
    _, euclid = bowen_counts(f, "euclid", K, args.eps, args.n_max, args.grid_step)
    _, circle = bowen_counts(f, "circle", K, args.eps, 3 * args.n_max, args.grid_step)

    print(f"{'n':>3} {'N_n':>5} {'a_n/n':>8} {'euclid':>8} {'circle':>8}")
    for n in range(1, args.n_max + 1):
        print(f"{n:3d} {cover.counts[n - 1]:5d} {cover.ratios[n - 1]:8.4f} "
              f"{euclid.counts[n - 1]:8d} {circle.counts[n - 1]:8d}")
    print(f"cover upper bound min a_n/n : {cover.estimate:.4f}")
    print(f"Euclidean separated slope   : {euclid.slope:.4f}  (log 2 = {math.log(2):.4f})")
    print(f"chord separated slope       : {circle.slope:.4f}  over n <= {3 * args.n_max}")


if __name__ == "__main__":
    main()
