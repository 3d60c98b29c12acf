"""Run the full check suite and print a one-line summary per check."""

import argparse
import sys

from nlcslab.checks import SuiteConfig, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--rotation-trials", type=int, default=2000)
    args = ap.parse_args()

    results = run_suite(SuiteConfig(seed=args.seed, rotation_trials=args.rotation_trials))
    for r in results:
        print(f"{'ok  ' if r.passed else 'FAIL'} {r.check:48s} observed={r.observed:.12g} bound={r.bound:.12g}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
