#!/usr/bin/env python3
"""Sweep random-adversary regret over seeds for one problem.

Each seed runs the learner against a fresh random sequence, measures
regret against the offline comparator, and checks the closed-form bound.

    python3 scripts/run_regret.py --problem maxcut --n 8 --T 2000 --seeds 10
    python3 scripts/run_regret.py --problem cf --m 8 --n 8 --tau0 8 --T 2000
"""

import argparse
import sys
import time

import numpy as np

from matpred.adversaries import random_adversary
from matpred.cli import run_learner
from matpred.problems import (
    best_cf_subgradient,
    best_cut_bruteforce,
    best_permutation_bruteforce,
    cf_config,
    gambling_config,
    maxcut_config,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--problem", choices=["maxcut", "gambling", "cf"], required=True)
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--m", type=int, default=None)
    ap.add_argument("--tau0", type=float, default=None)
    ap.add_argument("--G", type=float, default=1.0)
    ap.add_argument("--T", type=int, default=1000)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--first-seed", type=int, default=1)
    args = ap.parse_args()
    m = args.m or args.n

    if args.problem == "maxcut":
        cfg = maxcut_config(args.n, args.T)
    elif args.problem == "gambling":
        cfg = gambling_config(args.n, args.T)
    else:
        tau0 = args.tau0 if args.tau0 is not None else float(m)
        cfg = cf_config(m, args.n, tau0, args.G, args.T)

    bound = cfg.regret_bound()
    print(f"problem {args.problem}  T={args.T}  eta={cfg.eta:.6g}  bound={bound:.2f}")
    regrets = []
    for seed in range(args.first_seed, args.first_seed + args.seeds):
        seq = random_adversary(args.problem, m, args.n, args.T, seed, G=args.G)
        start = time.perf_counter()
        _, total = run_learner(cfg, seq)
        if args.problem == "maxcut":
            _, comp = best_cut_bruteforce(seq.rounds, args.n)
        elif args.problem == "gambling":
            _, comp = best_permutation_bruteforce(seq.rounds, args.n)
        else:
            _, comp = best_cf_subgradient(seq.rounds, m, args.n, tau0)
        regret = total - comp
        regrets.append(regret)
        flag = "ok" if regret <= bound else "VIOLATION"
        print(f"  seed {seed:3d}  loss {total:10.2f}  comparator {comp:10.2f}  "
              f"regret {regret:8.2f}  [{flag}]  ({time.perf_counter() - start:.1f}s)")
    regrets = np.array(regrets)
    print(f"mean regret {regrets.mean():.2f}  max {regrets.max():.2f}  bound {bound:.2f}")
    return 0 if regrets.max() <= bound else 1


if __name__ == "__main__":
    sys.exit(main())
