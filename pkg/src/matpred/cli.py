"""Experiment harness CLI.

Subcommands: run (learner vs adversary with CSV trace), decompose
(construct + validate a decomposition), lowerbound (aggregate the
stochastic adversaries over seeds), verify (desk-scale invariant suites).
Exit codes: 0 success, 1 invariant/validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

import numpy as np

from . import adversaries, decompose, problems
from .adversaries import Sequence
from .mmw import ConstraintSet, LinConstraint, project_qre
from .omp import OmpConfig, new_session, omp_round
from .problems import LossFn


# ---------------------------------------------------------------------------
# harness

def run_learner(cfg: OmpConfig, seq: Sequence, trace_path: str | None = None):
    """Run the prediction engine over a sequence. Returns (session, total loss)."""
    session = new_session(cfg)
    total = 0.0
    out = open(trace_path, "w") if trace_path else None
    try:
        if out:
            out.write("t,i,j,yhat,g,loss,cumloss\n")
        for (i, j), lf in seq.rounds:
            yhat, session = omp_round(session, i, j, lf)
            ev = session.history[-1]
            total += ev.loss
            if out:
                out.write(f"{ev.t},{ev.i},{ev.j},{ev.yhat:.12g},{ev.g:.12g},"
                          f"{ev.loss:.12g},{total:.12g}\n")
                out.flush()
    finally:
        if out:
            out.close()
    return session, total


def comparator_loss(problem: str, seq: Sequence, method: str, tau0: float | None = None):
    """Offline comparator total for a finished sequence, or None."""
    if method == "none":
        return None
    if problem == "maxcut":
        _, loss = problems.best_cut_bruteforce(seq.rounds, seq.n)
        return loss
    if problem == "gambling":
        _, loss = problems.best_permutation_bruteforce(seq.rounds, seq.n)
        return loss
    if problem == "cf":
        _, loss = problems.best_cf_subgradient(seq.rounds, seq.m, seq.n, tau0)
        return loss
    raise ValueError(problem)


# ---------------------------------------------------------------------------
# file formats

def read_matrix(path: str) -> np.ndarray:
    """Plain-text matrix: first line 'm n', then m rows of n decimals."""
    with open(path) as f:
        m, n = map(int, f.readline().split())
        rows = [list(map(float, f.readline().split())) for _ in range(m)]
    W = np.array(rows)
    if W.shape != (m, n):
        raise ValueError(f"{path}: expected {m}x{n} matrix, got {W.shape}")
    return W


def write_matrix(path: str, W: np.ndarray):
    with open(path, "w") as f:
        f.write(f"{W.shape[0]} {W.shape[1]}\n")
        for row in W:
            f.write(" ".join(f"{v:.12g}" for v in row) + "\n")


def read_sequence(path: str, m: int, n: int) -> Sequence:
    """Sequence CSV: t,i,j,kind,param."""
    rounds = []
    with open(path) as f:
        header = f.readline()
        if not header.startswith("t,"):
            raise ValueError(f"{path}: missing sequence header")
        for line in f:
            t, i, j, kind, param = line.strip().split(",")
            rounds.append(((int(i), int(j)), LossFn(kind, float(param))))
    return Sequence(m=m, n=n, seed=0, rounds=tuple(rounds))


def write_sequence(path: str, seq: Sequence):
    with open(path, "w") as f:
        f.write("t,i,j,kind,param\n")
        for t, ((i, j), lf) in enumerate(seq.rounds, start=1):
            f.write(f"{t},{i},{j},{lf.kind},{lf.param:.12g}\n")


def _apply_config_file(args: argparse.Namespace, parser: argparse.ArgumentParser):
    """Fill in unset flags from a key = value config file; flags win."""
    if not getattr(args, "config", None):
        return
    values = {}
    with open(args.config) as f:
        for line in f:
            line = line.split("#")[0].strip()
            if not line:
                continue
            key, _, val = line.partition("=")
            values[key.strip().replace("-", "_")] = val.strip()
    defaults = {a.dest: a.default for a in parser._actions}
    for key, val in values.items():
        if not hasattr(args, key):
            parser.error(f"unknown config key {key!r}")
        if getattr(args, key) == defaults.get(key):
            cur = defaults.get(key)
            cast = type(cur) if cur is not None else str
            setattr(args, key, cast(val) if cast is not bool else val.lower() in ("1", "true", "yes"))


# ---------------------------------------------------------------------------
# subcommands

def _make_config(args) -> OmpConfig:
    if args.eta is not None and args.eta <= 0:
        raise ValueError("eta override must be > 0")
    if args.problem == "maxcut":
        return problems.maxcut_config(args.n, args.T, eta=args.eta)
    if args.problem == "gambling":
        return problems.gambling_config(args.n, args.T, eta=args.eta)
    return problems.cf_config(args.m, args.n, args.tau0, args.G, args.T, eta=args.eta)


def _make_sequence(args) -> Sequence:
    if args.adversary == "file":
        return read_sequence(args.sequence_file, args.m or args.n, args.n)
    if args.adversary == "lowerbound":
        if args.problem == "maxcut":
            return adversaries.maxcut_lb(args.n, args.T, args.seed)
        if args.problem == "cf":
            return adversaries.cf_lb(args.m, args.n, args.tau0, args.G, args.T, args.seed)
        raise ValueError("no lower-bound adversary for gambling")
    return adversaries.random_adversary(args.problem, args.m or args.n, args.n,
                                        args.T, args.seed, G=args.G)


def cmd_run(args) -> int:
    cfg = _make_config(args)
    seq = _make_sequence(args)
    start = time.perf_counter()
    session, total = run_learner(cfg, seq, trace_path=args.out)
    elapsed = time.perf_counter() - start
    comp = comparator_loss(args.problem, seq, args.comparator, tau0=getattr(args, "tau0", None))
    bound = cfg.regret_bound()
    print(f"problem          {args.problem}")
    print(f"rounds           {len(seq)}")
    print(f"eta              {cfg.eta:.6g}")
    print(f"max eta*||L||    {session.max_eta_norm:.6g}")
    print(f"cumulative loss  {total:.6f}")
    if comp is not None:
        report = problems.evaluate_run(total, comp, bound)
        print(f"comparator loss  {comp:.6f}")
        print(f"realized regret  {report.regret:.6f}")
        print(f"theoretical bound {bound:.6f}")
        print(f"bound satisfied  {report.bound_satisfied}")
    else:
        print(f"theoretical bound {bound:.6f}")
    print(f"wall time        {elapsed:.2f}s")
    return 0


def cmd_decompose(args) -> int:
    if args.klass == "cut":
        members = frozenset(int(x) for x in args.set.split(",")) if args.set else frozenset()
        c = decompose.CutSet(n=args.n, members=members)
        d = decompose.decompose_cut(c)
        W = decompose.cut_matrix(c)
    elif args.klass == "triangular":
        d = decompose.decompose_triangular(args.k)
        W = decompose.triangular(2 ** args.k)
    elif args.klass == "permutation":
        mapping = tuple(int(x) for x in args.perm.split(","))
        pi = decompose.Permutation(n=len(mapping), mapping=mapping)
        d = decompose.decompose_permutation(pi)
        W = decompose.perm_matrix(pi)
    else:  # tracenorm
        W = read_matrix(args.file)
        d = decompose.decompose_trace_norm(W)
    report = decompose.validate(d, W, tol=args.tol)
    print(f"beta             {d.beta:.6g}")
    print(f"tau (guaranteed) {d.tau:.6g}")
    print(f"tau (realized)   {report.realized_trace:.6g}")
    for name, val in report.residuals().items():
        print(f"residual {name:<15} {val:.3e}")
    print(f"valid            {report.passed}")
    if args.dump:
        write_matrix(args.dump + ".P", d.P)
        write_matrix(args.dump + ".N", d.N)
    return 0 if report.passed else 1


def cmd_lowerbound(args) -> int:
    seeds = list(range(args.seed, args.seed + args.seeds))
    regrets = []
    for s in seeds:
        if args.problem == "maxcut":
            seq = adversaries.maxcut_lb(args.n, args.T, s)
            cfg = problems.maxcut_config(args.n, args.T)
            _, total = run_learner(cfg, seq)
            _, comp = problems.best_cut_bruteforce(seq.rounds, args.n)
        elif args.problem == "cf":
            seq = adversaries.cf_lb(args.m, args.n, args.tau0, args.G, args.T, s)
            cfg = problems.cf_config(args.m, args.n, args.tau0, args.G, args.T)
            _, total = run_learner(cfg, seq)
            Wstar = adversaries.cf_lb_comparator(seq, args.tau0, args.G)
            comp = problems.comparator_matrix_value(seq.rounds, Wstar)
        else:
            raise ValueError("lower bounds exist for maxcut and cf only")
        regrets.append(total - comp)
    regrets = np.array(regrets)
    if args.problem == "maxcut":
        theorem = math.sqrt(args.n * args.T / 16)
    else:
        theorem = args.G * math.sqrt(0.5 * args.tau0 * math.sqrt(args.n) * args.T)
    print(f"seeds            {len(seeds)}")
    print(f"mean regret      {regrets.mean():.4f}")
    if len(seeds) > 1:
        print(f"stddev regret    {regrets.std(ddof=1):.4f}")
    print(f"theorem value    {theorem:.4f}")
    return 0


def _verify_decompositions(rng) -> list[str]:
    failures = []
    for n in (2, 4, 8, 16):
        for _ in range(5):
            members = frozenset(int(i) + 1 for i in np.flatnonzero(rng.integers(0, 2, n)))
            c = decompose.CutSet(n=n, members=members)
            if not decompose.validate(decompose.decompose_cut(c), decompose.cut_matrix(c)).passed:
                failures.append(f"cut n={n} A={sorted(members)}")
    for k in range(5):
        d = decompose.decompose_triangular(k)
        if not decompose.validate(d, decompose.triangular(2 ** k)).passed:
            failures.append(f"triangular k={k}")
    for n in (3, 5, 8):
        mapping = tuple(int(v) for v in rng.permutation(n) + 1)
        pi = decompose.Permutation(n=n, mapping=mapping)
        if not decompose.validate(decompose.decompose_permutation(pi), decompose.perm_matrix(pi)).passed:
            failures.append(f"permutation n={n}")
    for shape in ((4, 6), (8, 8)):
        W = rng.uniform(-1, 1, shape)
        if not decompose.validate(decompose.decompose_trace_norm(W), W).passed:
            failures.append(f"tracenorm {shape}")
    return failures


def _verify_projection(rng) -> tuple[list[str], float]:
    from .omp import constraints_Kt
    failures = []
    worst = 0.0
    for p in (2, 4, 8):
        cfg = problems.cf_config(p // 2 or 1, p - (p // 2 or 1), 1.0, 1.0, 100)
        N = 2 * cfg.p
        for _ in range(10):
            M = rng.standard_normal((N, N))
            Y = 0.1 * (M @ M.T) / N + 0.05 * np.eye(N)
            cs = constraints_Kt(1, 1, cfg)
            X, duals = project_qre(Y, cs)
            vals = [float(np.sum(c.A * X)) for c in cs.constraints]
            primal = max(v - c.b for v, c in zip(vals, cs.constraints))
            slack = max(a * (c.b - v) / (1 + abs(c.b))
                        for a, v, c in zip(duals, vals, cs.constraints))
            worst = max(worst, primal, slack)
            if primal > 1e-6 or slack > 1e-5:
                failures.append(f"projection p={p}: primal={primal:.2e} slack={slack:.2e}")
    return failures, worst


def cmd_verify(args) -> int:
    rng = np.random.Generator(np.random.Philox(12345))
    failures = []
    if args.suite in ("decompositions", "all"):
        fails = _verify_decompositions(rng)
        failures += fails
        print(f"decompositions   {'pass' if not fails else 'FAIL'}")
    if args.suite in ("projection", "all"):
        fails, worst = _verify_projection(rng)
        failures += fails
        print(f"projection       {'pass' if not fails else 'FAIL'} (max KKT residual {worst:.2e})")
    for f in failures:
        print(f"  failure: {f}")
    return 0 if not failures else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matpred",
                                     description="Online matrix prediction harness")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the learner against an adversary")
    run.add_argument("--problem", choices=["maxcut", "gambling", "cf"], required=True)
    run.add_argument("--n", type=int, default=8)
    run.add_argument("--m", type=int, default=None)
    run.add_argument("--tau0", type=float, default=None, help="trace-norm bound (cf)")
    run.add_argument("--G", type=float, default=1.0, help="Lipschitz bound (cf)")
    run.add_argument("--T", type=int, default=1000)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--eta", type=float, default=None, help="learning rate override")
    run.add_argument("--adversary", choices=["random", "lowerbound", "file"], default="random")
    run.add_argument("--sequence-file", default=None)
    run.add_argument("--out", default=None, help="CSV trace path")
    run.add_argument("--comparator", choices=["bruteforce", "subgradient", "none"],
                     default="bruteforce")
    run.add_argument("--config", default=None, help="key = value config file; flags win")
    run.set_defaults(func=cmd_run, parser=run)

    dec = sub.add_parser("decompose", help="construct and validate a decomposition")
    dec.add_argument("klass", choices=["cut", "triangular", "tracenorm", "permutation"])
    dec.add_argument("--n", type=int, default=8)
    dec.add_argument("--set", default=None, help="cut members, comma separated")
    dec.add_argument("--k", type=int, default=3)
    dec.add_argument("--perm", default=None, help="permutation values, comma separated")
    dec.add_argument("--file", default=None, help="matrix file (tracenorm)")
    dec.add_argument("--tol", type=float, default=1e-8)
    dec.add_argument("--dump", default=None, help="dump P/N matrices to this prefix")
    dec.set_defaults(func=cmd_decompose, parser=dec)

    lb = sub.add_parser("lowerbound", help="aggregate a lower-bound adversary over seeds")
    lb.add_argument("--problem", choices=["maxcut", "cf"], required=True)
    lb.add_argument("--n", type=int, default=8)
    lb.add_argument("--m", type=int, default=4)
    lb.add_argument("--tau0", type=float, default=4.0)
    lb.add_argument("--G", type=float, default=1.0)
    lb.add_argument("--T", type=int, default=4096)
    lb.add_argument("--seed", type=int, default=1, help="first seed")
    lb.add_argument("--seeds", type=int, default=1, help="number of seeds")
    lb.set_defaults(func=cmd_lowerbound, parser=lb)

    ver = sub.add_parser("verify", help="run invariant suites at desk scale")
    ver.add_argument("suite", choices=["decompositions", "projection", "all"])
    ver.set_defaults(func=cmd_verify, parser=ver)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "run" and args.problem == "maxcut":
        args.G = 0.5
    if args.command == "run" and args.problem == "cf" and args.tau0 is None:
        args.tau0 = float(args.m or args.n)
    if args.command == "run" and args.m is None:
        args.m = args.n
    _apply_config_file(args, args.parser)
    try:
        return args.func(args)
    except (ValueError, IndexError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
