#!/usr/bin/env python3
"""Aggregate the stochastic lower-bound adversaries over seeds.

Runs the learner against the interval adversaries and compares the mean
realized regret with the theorem values sqrt(n T / 16) (max-cut) and
G sqrt(tau0 sqrt(n) T / 2) (collaborative filtering).

    python3 scripts/run_lowerbounds.py --seeds 20
"""

import argparse
import math
import sys

import numpy as np

from matpred.adversaries import cf_lb, cf_lb_comparator, maxcut_lb
from matpred.cli import run_learner
from matpred.problems import (
    best_cut_bruteforce,
    cf_config,
    comparator_matrix_value,
    maxcut_config,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=8, help="max-cut graph size")
    ap.add_argument("--T", type=int, default=4096)
    ap.add_argument("--cf-m", type=int, default=4)
    ap.add_argument("--cf-n", type=int, default=4)
    ap.add_argument("--tau0", type=float, default=4.0)
    ap.add_argument("--G", type=float, default=1.0)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--first-seed", type=int, default=1)
    args = ap.parse_args()
    seeds = range(args.first_seed, args.first_seed + args.seeds)

    cfg = maxcut_config(args.n, args.T)
    regrets = []
    for s in seeds:
        seq = maxcut_lb(args.n, args.T, s)
        _, total = run_learner(cfg, seq)
        _, comp = best_cut_bruteforce(seq.rounds, args.n)
        regrets.append(total - comp)
    regrets = np.array(regrets)
    theorem = math.sqrt(args.n * args.T / 16)
    print(f"max-cut  n={args.n} T={args.T}  mean regret {regrets.mean():.2f} "
          f"(std {regrets.std(ddof=1):.2f})  theorem {theorem:.2f}")

    cfg = cf_config(args.cf_m, args.cf_n, args.tau0, args.G, args.T)
    regrets = []
    for s in seeds:
        seq = cf_lb(args.cf_m, args.cf_n, args.tau0, args.G, args.T, s)
        _, total = run_learner(cfg, seq)
        comp = comparator_matrix_value(
            seq.rounds, cf_lb_comparator(seq, args.tau0, args.G))
        regrets.append(total - comp)
    regrets = np.array(regrets)
    theorem = args.G * math.sqrt(0.5 * args.tau0 * math.sqrt(args.cf_n) * args.T)
    print(f"cf       m={args.cf_m} n={args.cf_n} tau0={args.tau0} T={args.T}  "
          f"mean regret {regrets.mean():.2f} (std {regrets.std(ddof=1):.2f})  "
          f"theorem {theorem:.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
