"""Perturb the involution's weight and watch which checks notice.

Checks that only use the involution property stay green: a shifted weight
still gives an involution, just for a different inner product.
"""

import argparse

from xiops.verify import SuiteConfig, run_all

GROUPS = "selfadjoint_*_h0"

def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--shift", type=float, nargs="+", default=[0.0, 1e-3, 1e-2, 0.1])
    ap.add_argument("--filter", default=None, help="defaults to a fast subset; use '*' for all")
    args = ap.parse_args()
    pattern = args.filter or "{commutation,mellin,involution,selfadjoint_Zsym_plus_h0}"

    groups = pattern.strip("{}").split(",") if pattern.startswith("{") else [pattern]
    for shift in args.shift:
        reports = [r for g in groups for r in run_all(SuiteConfig(tau_shift=shift), g)]
        bad = [r for r in reports if not r.passed]
        print(f"shift {shift:<7g} {len(bad):3d}/{len(reports)} fail")
        for r in bad:
            print(f"    {r.name:<45} {r.residual:.2e}")

if __name__ == "__main__":
    main()
