"""Empirical acceptance rate of in-rhythm candidates.

Variations follow one normal law per trial; the candidate's variation is a
fresh draw from the same law. Reports the rate per group size for each alpha
and both denominators, which shows how the size-n divisor biases the mean
variation downward for small groups.

    python scripts/safe_interval_rate.py --trials 5000
"""

import argparse

import numpy as np

from cineparse.model import Shot
from cineparse.rhythm import Denominator, ShotGroup, aggregation_test


def acceptance_rate(n, alpha, denominator, trials, rng, mu=50.0, rel_sigma=0.1):
    accepted = 0
    for _ in range(trials):
        v = np.maximum(0, np.rint(rng.normal(mu, rel_sigma * mu, n))).astype(int)
        d = [1000]
        for k in range(n - 1):
            d.append(d[-1] + (int(v[k]) if k % 2 == 0 else -int(v[k])))
        step = int(v[-1]) if (n - 1) % 2 == 0 else -int(v[-1])
        gp = ShotGroup(tuple(range(n)), tuple(d))
        accepted += aggregation_test(gp, Shot(n, 0, d[-1] + step), alpha, denominator=denominator).accept
    return accepted / trials


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--alpha", type=float, action="append")
    ap.add_argument("--sizes", type=int, nargs="+", default=[3, 4, 5, 8, 12, 20, 30, 50])
    args = ap.parse_args()
    alphas = args.alpha or [1.0, 2.25, 2.5]
    print(f"{'alpha':>6} {'denominator':>12} " + " ".join(f"{n:>6}" for n in args.sizes))
    for alpha in alphas:
        for den in Denominator:
            rng = np.random.default_rng(args.seed)
            rates = [acceptance_rate(n, alpha, den, args.trials, rng) for n in args.sizes]
            print(f"{alpha:>6} {den.value:>12} " + " ".join(f"{r:6.3f}" for r in rates))


if __name__ == "__main__":
    main()
