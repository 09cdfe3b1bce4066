"""Deviation of heat-flow Xi roots from the predicted lattice, per k.

The acceptance setting is m=1, rho=0.05, k<=3.  Larger rho or k shows where
the lattice stops describing the roots (around height 8 rho pi k ~ 4).
"""

import argparse

from xiops.zeta_xi import LatticeMismatchError, equisym_roots


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=1)
    ap.add_argument("--rho", type=float, nargs="+", default=[0.02, 0.05, 0.08, 0.1])
    ap.add_argument("--k-max", type=int, default=5)
    args = ap.parse_args()

    print(f"{'variant':7} {'rho':>6}  " + " ".join(f"{'k=' + str(k):>8}" for k in range(args.k_max + 1)))
    for variant in ("plain", "tilde"):
        for rho in args.rho:
            try:
                rows = equisym_roots(args.m, rho, args.k_max, variant)
            except LatticeMismatchError as exc:
                print(f"{variant:7} {rho:6g}  {exc}")
                continue
            devs = " ".join(f"{abs(r['located'] - r['predicted']):8.1e}" for r in rows)
            print(f"{variant:7} {rho:6g}  {devs}")


if __name__ == "__main__":
    main()
