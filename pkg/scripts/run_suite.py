"""Run the check battery and print a pass/fail table.

    python3 scripts/run_suite.py                 # everything
    python3 scripts/run_suite.py --filter 'weil*' --json out.json
"""

import argparse
import time

from xiops.verify import SuiteConfig, reports_to_json, run_all


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--filter", default=None, help="glob over check or group names")
    ap.add_argument("--seed", type=int, default=SuiteConfig.seed)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--json", default=None, help="also write the reports here")
    args = ap.parse_args()

    cfg = SuiteConfig(seed=args.seed, workers=args.workers)
    t0 = time.perf_counter()
    reports = run_all(cfg, args.filter)
    wall = time.perf_counter() - t0

    width = max((len(r.name) for r in reports), default=10)
    for r in reports:
        flag = "PASS" if r.passed else "FAIL"
        print(f"{flag}  {r.name:<{width}}  {r.residual:10.3e}  tol {r.tolerance:.0e}")
    bad = sum(not r.passed for r in reports)
    print(f"\n{len(reports)} checks, {bad} failed, {wall:.1f} s")
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(reports_to_json(reports, timings=True))


if __name__ == "__main__":
    main()
