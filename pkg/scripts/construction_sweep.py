"""Run the randomized 2-UFFD construction over many seeds and summarize."""
import argparse
import statistics

from uffd.construct import EnsembleParams, RetriesExhausted, build_uffd2
from uffd.ratebound import advise_n, expected_bad_pairs


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--t", type=int, default=60)
    parser.add_argument("--p", type=float, default=0.3105)
    parser.add_argument("--n", type=int, default=24)
    parser.add_argument("--seeds", type=int, default=50)
    parser.add_argument("--threshold", default="sqrt-half-n", choices=["sqrt-half-n", "sqrt-n"])
    args = parser.parse_args()

    w = EnsembleParams(args.t, args.p, args.n).w
    e0, e1 = expected_bad_pairs(args.t, w, args.n)
    print(f"t={args.t} w={w} n={args.n}: E[bad disjoint]={e0:.3g} E[bad overlap]={e1:.3g}"
          f" (advised n <= {advise_n(args.t, w)})")

    kept, rates, bad, attempts, failed = [], [], [], [], 0
    for seed in range(args.seeds):
        try:
            C, rep = build_uffd2(EnsembleParams(args.t, args.p, args.n, seed), args.threshold)
        except RetriesExhausted:
            failed += 1
            kept.append(0)
            continue
        kept.append(C.n)
        rates.append(rep.rate)
        bad.append(rep.bad_pairs)
        attempts.append(rep.attempts)

    print(f"verified codes   {args.seeds - failed}/{args.seeds}")
    print(f"median retention {statistics.median(kept)} of {args.n}")
    if rates:
        print(f"mean bad pairs   {statistics.mean(bad):.3f}")
        print(f"mean attempts    {statistics.mean(attempts):.3f}")
        print(f"realized rate    {statistics.mean(rates):.4f} (log2(n_final)/t)")


if __name__ == "__main__":
    main()
