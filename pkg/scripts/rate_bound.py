"""Reproduce the d=2 rate bound and print R0/R1 along p."""
import argparse

from uffd.ratebound import known_bounds, optimize_rate


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--p-grid", type=int, default=200)
    parser.add_argument("--every", type=int, default=10, help="print every k-th grid row")
    args = parser.parse_args()

    res = optimize_rate(p_points=args.p_grid)
    print(f"{'p':>8} {'R0':>9} {'R1':>9} {'min':>9}")
    for p, a, b in res.trace[:: args.every]:
        print(f"{p:8.4f} {a:9.5f} {b:9.5f} {min(a, b):9.5f}")
    print()
    print(f"max-min rate  {res.rate:.6f} at p = {res.p_star:.6f} ({res.binding} binding)")
    print(f"alpha*        R0: {res.alpha_star_r0:.6f}  R1: {res.alpha_star_r1:.6f}")
    kb = known_bounds(2)
    for name in ("disjunctive", "ssm", "uffd", "union_free"):
        lo, hi = getattr(kb, name)
        print(f"{name:12s}  [{lo:.4f}, {hi:.4f}]")


if __name__ == "__main__":
    main()
