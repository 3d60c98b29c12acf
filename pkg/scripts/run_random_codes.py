"""Monte Carlo over random r x d parity checks: odd-row and all-ones-span frequencies."""

import argparse

from nlcslab.codes import verify_random_code_lemma


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=int, nargs="+", default=[4, 6, 8, 10])
    ap.add_argument("--r", type=int, nargs="+", default=[1, 2, 3, 4])
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print("r,d,trials,odd_freq,odd_prob,span_freq,span_bound,ok")
    for d in args.d:
        for r in args.r:
            if r > d:
                continue
            rep = verify_random_code_lemma(r, d, args.trials, seed=args.seed)
            ok = rep.odd_row_ok and rep.span_bound_ok
            print(f"{r},{d},{args.trials},{rep.odd_row_freq:.5f},{rep.odd_row_prob:.5f},"
                  f"{rep.all_ones_in_span_freq:.5f},{rep.all_ones_span_bound:.5f},{ok}")


if __name__ == "__main__":
    main()
