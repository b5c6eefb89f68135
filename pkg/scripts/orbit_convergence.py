"""Birkhoff averages and orbit KS distance versus orbit length, over random starts.

Used to pick the 0.01 / 0.02 tolerances at n = 1e6: prints, for each length,
the worst deviation seen across the starting points.
"""
import argparse

import numpy as np

from cauchy_invariance.ergodic import OBSERVABLE_LIMITS, OBSERVABLES, OrbitConfig, orbit
from cauchy_invariance.stats import cauchy_cdf, ks_one_sample


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--map", default="boole", choices=("boole", "simpson_newton"))
    ap.add_argument("--starts", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    starts = np.random.default_rng(args.seed).uniform(1, 3, args.starts)
    print("length  max|inv1p2-1/2|  max|indicator-1/4|  max KS")
    for length in (10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6):
        worst = np.zeros(3)
        for x0 in starts:
            r = orbit(OrbitConfig(args.map, float(x0), length), OBSERVABLES)
            dev = [abs(r.birkhoff_values[k] - OBSERVABLE_LIMITS[k]) for k in OBSERVABLES]
            worst = np.maximum(worst, dev + [ks_one_sample(r.samples, cauchy_cdf)])
        print(f"{length:7d}  {worst[0]:.5f}          {worst[1]:.5f}            {worst[2]:.5f}")


if __name__ == "__main__":
    main()
