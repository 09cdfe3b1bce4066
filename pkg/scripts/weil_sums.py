"""Truncated Weil sums for the reference functions as the zero count grows."""

import argparse

from xiops.funcspace import battery
from xiops.zeta_xi import find_critical_zeros, weil_sum


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--counts", type=int, nargs="+", default=[5, 10, 25, 50])
    args = ap.parse_args()

    zl = find_critical_zeros(150.0)
    fns = battery()
    print("zeros " + " ".join(f"{name:>12}" for name in fns))
    for n in args.counts:
        head = zl.head(n)
        print(f"{n:5d} " + " ".join(f"{weil_sum(f, head):12.5e}" for f in fns.values()))


if __name__ == "__main__":
    main()
