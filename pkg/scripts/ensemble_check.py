"""Compare Monte Carlo collision frequencies of the ensemble with the exact P0, P1."""
import argparse
import math

from uffd.construct import empirical_collision_rates
from uffd.ratebound import collision_probs


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=10**5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"{'t':>3} {'w':>3} {'P0':>10} {'emp0':>10} {'z0':>6} {'P1':>10} {'emp1':>10} {'z1':>6}")
    for t, w in [(8, 2), (10, 3), (12, 4), (14, 4), (16, 5)]:
        cp = collision_probs(t, w)
        e0, e1 = empirical_collision_rates(t, w, args.samples, args.seed)
        z = []
        for emp, exact in ((e0, float(cp.P0)), (e1, float(cp.P1))):
            se = math.sqrt(exact * (1 - exact) / args.samples)
            z.append((emp - exact) / se if se else float("nan"))
        print(f"{t:3d} {w:3d} {float(cp.P0):10.3e} {e0:10.3e} {z[0]:+6.2f} "
              f"{float(cp.P1):10.3e} {e1:10.3e} {z[1]:+6.2f}")


if __name__ == "__main__":
    main()
