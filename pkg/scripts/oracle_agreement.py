#!/usr/bin/env python3
"""Stress the closed-form solver against the value-iteration oracle.

Draws seeded random instances (n in 2..8, costs in (0,10), C_h in (0,20),
gamma in [0,0.95]), solves each twice, and reports the worst value gap and
certification residual over the non-fallback solves.
"""
import argparse
import sys
import time

import numpy as np

from jamgame import (CONNECTIVITY, CostVector, GameParameters, ORACLE_FALLBACK,
                     solve_closed_form, solve_oracle, verify_shapley)


def random_instance(rng):
    n = int(rng.integers(2, 9))
    while True:
        lams = np.sort(rng.uniform(0.0, 10.0, size=n))
        if n == 1 or np.diff(lams).min() > 1e-6:
            break
    costs = CostVector(values=rng.permutation(lams), category=CONNECTIVITY)
    params = GameParameters(hiding_cost=float(rng.uniform(0.0, 20.0) + 1e-9),
                            gamma=float(rng.uniform(0.0, 0.95)))
    return costs, params


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=20260816)
    ap.add_argument("--oracle-tol", type=float, default=1e-8)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    worst_gap = 0.0
    worst_residual = 0.0
    fallbacks = 0
    t0 = time.perf_counter()
    for _ in range(args.count):
        costs, params = random_instance(rng)
        sol = solve_closed_form(costs, params)
        if sol.case_label == ORACLE_FALLBACK:
            fallbacks += 1
            continue
        ref = solve_oracle(costs, params, tol=args.oracle_tol)
        worst_gap = max(worst_gap, abs(sol.value - ref.value))
        worst_residual = max(worst_residual,
                             verify_shapley(costs, params, sol).residual)
    dt = time.perf_counter() - t0

    print(f"{args.count} instances in {dt:.2f}s (seed {args.seed})")
    print(f"fallbacks: {fallbacks}")
    print(f"worst |V_closed - V_oracle|: {worst_gap:.3e}")
    print(f"worst certification residual: {worst_residual:.3e}")
    return 0 if (worst_gap <= 1e-6 and worst_residual <= 1e-8) else 1


if __name__ == "__main__":
    sys.exit(main())
