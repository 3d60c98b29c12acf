"""Exhaustive minima of the rotated single-term energies for k = 1..K qubits."""

import argparse
import time

from nlcslab.hamiltonian import PI8, local_bound_table, odd_weight_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k-max", type=int, default=4)
    ap.add_argument("--theta", type=float, default=PI8)
    args = ap.parse_args()

    t0 = time.perf_counter()
    rows = local_bound_table(args.k_max, args.theta)
    print(f"{'k':>2} {'term':>4} {'min energy':>16} {'expected':>16} {'max |<H^k>|':>12}")
    for r in rows:
        print(f"{r.k:>2} {r.kind:>4} {r.min_energy:16.12f} {odd_weight_bound(r.k):16.12f} {r.hadamard_max:12.6f}")
    print(f"done in {time.perf_counter() - t0:.2f} s")


if __name__ == "__main__":
    main()
