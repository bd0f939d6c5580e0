"""Problem adapters: configs, loss functions, and offline comparators.

Three comparison classes are wired to the prediction engine here: graph
cuts, permutations (gambling), and bounded-trace-norm matrices
(collaborative filtering). Each gets a config constructor and an offline
comparator used for regret measurement: exact brute force for cuts and
permutations, projected subgradient descent (an upper bound) for the
trace-norm class.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .decompose import CutSet, Permutation, cut_matrix, perm_matrix, trace_norm
from .omp import OmpConfig


@dataclass(frozen=True)
class LossFn:
    """A one-dimensional convex loss.

    kinds: "absolute_halved" (param = label, Lipschitz 1/2), "absolute"
    (param = label, Lipschitz 1), "linear" (param = coefficient,
    Lipschitz |param|). Subgradient at the kink of the absolute losses
    is 0.
    """

    kind: str
    param: float

    def value(self, yhat: float) -> float:
        if self.kind == "absolute_halved":
            return 0.5 * abs(yhat - self.param)
        if self.kind == "absolute":
            return abs(yhat - self.param)
        if self.kind == "linear":
            return self.param * yhat
        raise ValueError(f"unknown loss kind {self.kind!r}")

    def subgradient(self, yhat: float) -> float:
        if self.kind == "absolute_halved":
            return 0.5 * float(np.sign(yhat - self.param))
        if self.kind == "absolute":
            return float(np.sign(yhat - self.param))
        if self.kind == "linear":
            return self.param
        raise ValueError(f"unknown loss kind {self.kind!r}")

    @property
    def lipschitz(self) -> float:
        if self.kind == "absolute_halved":
            return 0.5
        if self.kind == "absolute":
            return 1.0
        return abs(self.param)


@dataclass(frozen=True)
class RegretReport:
    learner_loss: float
    comparator_loss: float
    regret: float
    bound: float
    bound_satisfied: bool


def maxcut_config(n: int, T: int, eta: float | None = None) -> OmpConfig:
    """Cuts of an n-node graph: symmetric class, (1, n)-decomposable,
    absolute-halved losses (G = 1/2)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return OmpConfig(m=n, n=n, symmetric_class=True, beta=1.0, tau=float(n),
                     G=0.5, T=T, prediction_range=(-1.0, 1.0), eta=eta)


def gambling_padded_size(n: int) -> tuple[int, int]:
    """(n', k) with n' = 2^k the smallest power of two >= n."""
    k = max(0, int(math.ceil(math.log2(n))))
    return 2 ** k, k


def gambling_config(n: int, T: int, eta: float | None = None) -> OmpConfig:
    """Permutations over n teams, run on the class padded to n' = 2^k teams.

    The padded class keeps the initial iterate feasible (tau / N = beta
    exactly) and carries the triangular decomposition's guaranteed bounds
    beta = k + 1, tau = 4 n' (k + 1). Predictions lie in [0, 1].
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    nprime, k = gambling_padded_size(n)
    return OmpConfig(m=nprime, n=nprime, symmetric_class=False,
                     beta=float(k + 1), tau=float(4 * nprime * (k + 1)),
                     G=1.0, T=T, prediction_range=(0.0, 1.0), eta=eta)


def cf_config(m: int, n: int, trace_bound: float, G: float, T: int,
              eta: float | None = None) -> OmpConfig:
    """Bounded-trace-norm m x n matrices: (sqrt(m+n), 2 tau0)-decomposable."""
    if trace_bound > m * math.sqrt(n) + 1e-9:
        raise ValueError(f"trace bound {trace_bound} exceeds m*sqrt(n) = {m * math.sqrt(n)}")
    return OmpConfig(m=m, n=n, symmetric_class=False,
                     beta=math.sqrt(m + n), tau=2.0 * trace_bound,
                     G=G, T=T, prediction_range=(-1.0, 1.0), eta=eta)


def _pair_losses(records) -> dict:
    """Group loss functions by (i, j)."""
    by_pair = {}
    for (i, j), lf in records:
        by_pair.setdefault((i, j), []).append(lf)
    return by_pair


def best_cut_bruteforce(records, n: int) -> tuple[CutSet, float]:
    """Exact minimizer of the cumulative loss over all 2^n cuts.

    records: iterable of ((i, j), LossFn). Ties break toward the smallest
    bit-set value (members encoded in the low bits).
    """
    if n > 20:
        raise ValueError("brute force limited to n <= 20")
    by_pair = _pair_losses(records)
    pairs = list(by_pair)
    best_mask, best_loss = 0, None
    for mask in range(2 ** n):
        total = 0.0
        for (i, j) in pairs:
            crosses = ((mask >> (i - 1)) ^ (mask >> (j - 1))) & 1
            w = 1.0 if crosses else -1.0
            total += sum(lf.value(w) for lf in by_pair[(i, j)])
        if best_loss is None or total < best_loss - 1e-12:
            best_mask, best_loss = mask, total
    members = frozenset(i + 1 for i in range(n) if (best_mask >> i) & 1)
    return CutSet(n=n, members=members), float(best_loss or 0.0)


def maxcut_weights(records, n: int) -> np.ndarray:
    """Aggregated label weights w_ij = sum of labels on the pair (i, j).

    The max-weight cut of this graph is a loss minimizer among cut
    matrices.
    """
    w = np.zeros((n, n))
    for (i, j), lf in records:
        if lf.kind != "absolute_halved":
            raise ValueError("max-cut weights need absolute-halved losses")
        w[i - 1, j - 1] += lf.param
        w[j - 1, i - 1] += lf.param
    return w


def cut_weight(weights: np.ndarray, c: CutSet) -> float:
    """Total weight crossing the cut."""
    W = cut_matrix(c)
    return float(0.5 * np.sum(weights * (W > 0)))


def best_permutation_bruteforce(records, n: int) -> tuple[Permutation, float]:
    """Exact minimizer over all n! permutations of the cumulative loss on
    W_pi entries. Ties break toward the lexicographically smallest mapping."""
    if n > 8:
        raise ValueError("brute force limited to n <= 8")
    by_pair = _pair_losses(records)
    pairs = list(by_pair)
    best_map, best_loss = None, None
    for perm in itertools.permutations(range(1, n + 1)):
        total = 0.0
        for (i, j) in pairs:
            w = 1.0 if perm[i - 1] <= perm[j - 1] else 0.0
            total += sum(lf.value(w) for lf in by_pair[(i, j)])
        if best_loss is None or total < best_loss - 1e-12:
            best_map, best_loss = perm, total
    return Permutation(n=n, mapping=best_map), float(best_loss)


def _cap_trace_norm(W: np.ndarray, tau0: float) -> np.ndarray:
    """Shrink singular values (l1-ball projection) so their sum is <= tau0."""
    U, s, Vt = np.linalg.svd(W, full_matrices=False)
    if s.sum() <= tau0:
        return W
    # Euclidean projection of the spectrum onto the simplex-scaled l1 ball.
    u = np.sort(s)[::-1]
    css = np.cumsum(u)
    rho = np.nonzero(u * np.arange(1, len(u) + 1) > (css - tau0))[0][-1]
    theta = (css[rho] - tau0) / (rho + 1.0)
    s = np.maximum(s - theta, 0.0)
    return (U * s) @ Vt


def best_cf_subgradient(records, m: int, n: int, tau0: float,
                        iters: int = 400) -> tuple[np.ndarray, float]:
    """Projected subgradient descent over the trace-norm-bounded box class.

    Alternates entry clipping with singular-value capping and returns the
    best feasible visited point. The returned loss upper-bounds the
    comparator optimum (and hence upper-bounds true regret).
    """
    by_entry = _pair_losses(records)

    def total_loss(W):
        return sum(lf.value(W[i - 1, j - 1]) for (i, j), lfs in by_entry.items() for lf in lfs)

    def feasible(W):
        return np.max(np.abs(W)) <= 1.0 + 1e-9 and trace_norm(W) <= tau0 + 1e-6

    W = np.zeros((m, n))
    best_W, best = W.copy(), total_loss(W)
    for it in range(1, iters + 1):
        G = np.zeros((m, n))
        for (i, j), lfs in by_entry.items():
            G[i - 1, j - 1] += sum(lf.subgradient(W[i - 1, j - 1]) for lf in lfs)
        norm = np.linalg.norm(G)
        if norm == 0.0:
            break
        W = W - (1.0 / math.sqrt(it)) * G / norm * math.sqrt(m * n)
        for _ in range(5):
            W = np.clip(W, -1.0, 1.0)
            W = _cap_trace_norm(W, tau0)
        W = np.clip(W, -1.0, 1.0)
        if feasible(W):
            cur = total_loss(W)
            if cur < best:
                best_W, best = W.copy(), cur
    return best_W, float(best)


def comparator_matrix_value(records, W: np.ndarray) -> float:
    """Cumulative loss of the fixed matrix W on a record sequence."""
    return sum(lf.value(W[i - 1, j - 1]) for (i, j), lf in records)


def cut_comparator_loss(records, c: CutSet) -> float:
    W = cut_matrix(c)
    return comparator_matrix_value(records, W)


def permutation_comparator_loss(records, pi: Permutation) -> float:
    W = perm_matrix(pi)
    return comparator_matrix_value(records, W)


def evaluate_run(learner_loss: float, comparator_loss: float, bound: float) -> RegretReport:
    """Regret report: learner total minus comparator total, against the
    closed-form bound. Negative regret is reported as-is."""
    regret = learner_loss - comparator_loss
    return RegretReport(
        learner_loss=float(learner_loss),
        comparator_loss=float(comparator_loss),
        regret=float(regret),
        bound=float(bound),
        bound_satisfied=bool(regret <= bound),
    )
