"""Sample t-rotation states for every n <= N, t <= n and write a CSV of minima."""

import argparse
import sys
import time

from nlcslab.rotstates import ScanConfig, conjecture_scan, scan_rows_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=5)
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    t0 = time.perf_counter()
    rows = []
    for n in range(1, args.n_max + 1):
        for t in range(n + 1):
            rows += conjecture_scan(ScanConfig(n, t, args.samples, args.seed))
            print(f"n={n} t={t} done ({time.perf_counter() - t0:.1f} s)", file=sys.stderr)
    text = scan_rows_csv(rows)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as f:
            f.write(text)
    bad = [r for r in rows if r.violations]
    for r in bad:
        print(f"NEEDS REVIEW n={r.n} t={r.t} {r.theta_policy}: {r.violations} violations", file=sys.stderr)
    sys.exit(1 if bad else 0)


if __name__ == "__main__":
    main()
