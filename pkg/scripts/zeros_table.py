"""Critical-line zeros from two independent routes, side by side.

Brent refinement on the direct engine against plain bisection on the
theta-integral engine.  The integral engine is absolutely accurate only, so
keep ``--t-max`` near 30 or below for the second column to be meaningful.
"""

import argparse

import numpy as np

from xiops.zeta_xi import bisection_zeros, find_critical_zeros


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t-max", type=float, default=31.0)
    args = ap.parse_args()

    brent = find_critical_zeros(args.t_max)
    bis = bisection_zeros(args.t_max)
    print(f"{'k':>3} {'direct + Brent':>22} {'integral + bisection':>22} {'gap':>10}")
    for k, (a, b) in enumerate(zip(brent.ordinates, bis), 1):
        print(f"{k:3d} {a:22.15f} {b:22.15f} {abs(a - b):10.2e}")
    if len(brent) != len(bis):
        print(f"count mismatch: {len(brent)} vs {len(bis)}")
    else:
        print(f"max gap {np.max(np.abs(brent.ordinates - bis)) if len(bis) else 0.0:.2e}")


if __name__ == "__main__":
    main()
