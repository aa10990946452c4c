"""Lap entropy of f^m against m times the lap entropy of f."""
import argparse

from cocompact import corpus
from cocompact.entropy import lap_entropy
from cocompact.plmap import iterate

MAPS = {"tent-extended": corpus.tent_extended, "example5": corpus.example_truncated}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=12)
    ap.add_argument("--powers", type=int, nargs="+", default=[2, 3])
    args = ap.parse_args()
    print(f"{'map':<15} {'m':>2} {'h(f)':>9} {'h(f^m)':>9} {'m h(f)':>9} {'error':>9}")
    for name, make in MAPS.items():
        f = make()
        h = lap_entropy(f, args.n_max).value
        for m in args.powers:
            hm = lap_entropy(iterate(f, m), max(2, args.n_max // m)).value
            print(f"{name:<15} {m:2d} {h:9.5f} {hm:9.5f} {m * h:9.5f} {abs(hm - m * h):9.2e}")


if __name__ == "__main__":
    main()
