"""The three-branch map 3x / 2 - 3x / 3x - 2 on [0, 1]: horseshoe, laps, itineraries."""
import argparse
import math
from fractions import Fraction

from cocompact import corpus
from cocompact.entropy import lap_series, spectral_entropy, transition_matrix
from cocompact.horseshoe import HorseshoeCertificate, entropy_lower_bound, itinerary_point, search, verified
from cocompact.intervals import Interval


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=1, help="number of unit cells kept")
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--word", default="12121212", help="itinerary over symbols 1 and 2")
    args = ap.parse_args()

    f = corpus.example_truncated(args.m)
    J = (Interval(0, Fraction(1, 3)), Interval(Fraction(2, 3), 1))
    cert = verified(f, HorseshoeCertificate(1, J))
    print(f"certificate {[str(iv) for iv in J]} verifies; lower bound {entropy_lower_bound(cert).value:.6f}")
    print(f"transition-matrix entropy {spectral_entropy(transition_matrix(f, J)).value:.6f}")

    laps = lap_series(f, args.n_max)
    for n, c in zip(laps.ns, laps.counts):
        print(f"  laps(f^{n}) = {c}  (3^n = {3 ** n})")
    print(f"lap entropy {laps.slope:.8f} vs log 3 = {math.log(3):.8f}")

    best = search(f, 3)
    print(f"search n_max=3: n={best.n}, p={best.p}, rate {best.rate:.4f}")

    it = itinerary_point(f, cert, [int(c) for c in args.word])
    for k, K in enumerate(it.intervals):
        print(f"  prefix {args.word[:k + 1]:<10} {str(K):<40} width {float(K.width):.3e}")
    print(f"midpoint {float(it.midpoint):.10f}")


if __name__ == "__main__":
    main()
