"""Reduction from online matrix prediction to OLO.

A session maintains a 2p x 2p PSD iterate whose upper-left and lower-right
halves carry the positive and negative parts of the predicted matrix. Each
round proceeds in the order: receive the queried entry, project the pending
exponentiated step onto the four-constraint polytope for that entry, read
off the prediction, evaluate the loss, and stash the next exponentiated
step.

Entry indices on the API surface are 1-based, matching the row/column
numbering of the predicted matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .decompose import Decomposition
from .linalg import inner
from .mmw import ConstraintSet, LinConstraint, OloState, exp_step, init_state, project_qre

# Predictions within this distance outside the range are clamped and
# recorded; anything farther is an invariant violation.
CLAMP_SLACK = 1e-6


class InvariantViolation(RuntimeError):
    pass


@dataclass(frozen=True)
class OmpConfig:
    """Shape and scale parameters of one online matrix prediction problem.

    q is m for a non-symmetric comparison class and 0 for a symmetric one;
    p is the order of the symmetrized matrices; the OLO iterate has order
    N = 2p. gamma is fixed at 4 G^2 by the loss-matrix construction.
    """

    m: int
    n: int
    symmetric_class: bool
    beta: float
    tau: float
    G: float
    T: int
    prediction_range: tuple = (-1.0, 1.0)
    eta: float | None = None

    def __post_init__(self):
        if self.beta < 1.0:
            raise ValueError("beta must be >= 1")
        if self.symmetric_class and self.m != self.n:
            raise ValueError("symmetric class requires m == n")
        if self.tau > 2 * self.p * self.beta + 1e-9:
            raise ValueError(
                f"tau={self.tau} exceeds 2*p*beta={2 * self.p * self.beta}; "
                "the initial iterate would be infeasible"
            )
        if self.eta is None:
            object.__setattr__(self, "eta", eta_default(self.tau, self.p, self.beta, self.G, self.T))
        elif self.eta <= 0:
            raise ValueError("eta must be > 0")

    @property
    def q(self) -> int:
        return 0 if self.symmetric_class else self.m

    @property
    def p(self) -> int:
        return self.n if self.symmetric_class else self.m + self.n

    @property
    def gamma(self) -> float:
        return 4.0 * self.G ** 2

    def regret_bound(self) -> float:
        """The closed-form guarantee 2 G sqrt(tau beta log(2p) T)."""
        return 2.0 * self.G * math.sqrt(self.tau * self.beta * math.log(2 * self.p) * self.T)


def eta_default(tau: float, p: int, beta: float, G: float, T: int) -> float:
    """Learning rate sqrt(tau log(N) / (beta gamma T)) with N = 2p, gamma = 4 G^2."""
    if T < 1:
        raise ValueError("T must be >= 1")
    return math.sqrt(tau * math.log(2 * p) / (beta * 4.0 * G ** 2 * T))


@dataclass(frozen=True)
class LossEvent:
    t: int
    i: int
    j: int
    yhat: float
    g: float
    loss: float


@dataclass
class OmpSession:
    """State threaded through omp_round; strictly sequential per session."""

    config: OmpConfig
    pending: np.ndarray  # exponentiated step awaiting projection
    round: int = 1
    history: list = field(default_factory=list)
    last_X: np.ndarray | None = None
    max_eta_norm: float = 0.0  # max eta * ||L_t|| observed


def new_session(cfg: OmpConfig) -> OmpSession:
    N = 2 * cfg.p
    return OmpSession(config=cfg, pending=(cfg.tau / N) * np.eye(N))


def predict(X: np.ndarray, i: int, j: int, cfg: OmpConfig) -> float:
    """Read the prediction X(i, j+q) - X(p+i, p+j+q) (1-based indices)."""
    _check_indices(i, j, cfg)
    p, q = cfg.p, cfg.q
    return float(X[i - 1, j + q - 1] - X[p + i - 1, p + j + q - 1])


def loss_matrix(g: float, i: int, j: int, cfg: OmpConfig) -> np.ndarray:
    """The 4-sparse symmetric loss matrix: +g at (i, j+q) and its mirror,
    -g at the shifted pair. Traceless, with Tr(L^2) = 4 g^2 and spectral
    norm |g|."""
    _check_indices(i, j, cfg)
    if abs(g) > cfg.G + 1e-12:
        raise ValueError(f"|g|={abs(g)} exceeds Lipschitz bound G={cfg.G}")
    p, q = cfg.p, cfg.q
    L = np.zeros((2 * p, 2 * p))
    L[i - 1, j + q - 1] = L[j + q - 1, i - 1] = g
    L[p + i - 1, p + j + q - 1] = L[p + j + q - 1, p + i - 1] = -g
    return L


def constraints_Kt(i: int, j: int, cfg: OmpConfig) -> ConstraintSet:
    """The four-constraint polytope for the queried entry: diagonal sum
    <= 4 beta, prediction within range, trace <= tau."""
    _check_indices(i, j, cfg)
    p, q = cfg.p, cfg.q
    N = 2 * p
    lo, hi = cfg.prediction_range

    D = np.zeros((N, N))
    for idx in (i - 1, j + q - 1, p + i - 1, p + j + q - 1):
        D[idx, idx] = 1.0

    E = np.zeros((N, N))
    E[i - 1, j + q - 1] = E[j + q - 1, i - 1] = 0.5
    E[p + i - 1, p + j + q - 1] = E[p + j + q - 1, p + i - 1] = -0.5

    return ConstraintSet(
        constraints=(
            LinConstraint(A=D, b=4.0 * cfg.beta),
            LinConstraint(A=E, b=float(hi)),
            LinConstraint(A=-E, b=float(-lo)),
            LinConstraint(A=np.eye(N), b=float(cfg.tau)),
        ),
        order=N,
        tau=cfg.tau,
    )


def omp_round(session: OmpSession, i: int, j: int, loss_fn) -> tuple[float, OmpSession]:
    """Play one round: project, predict, pay, step.

    `loss_fn` provides value(yhat) and subgradient(yhat). Returns the
    prediction and the updated session.
    """
    cfg = session.config
    if session.round > cfg.T:
        raise InvariantViolation(f"round {session.round} exceeds horizon T={cfg.T}")
    cs = constraints_Kt(i, j, cfg)
    X, _ = project_qre(session.pending, cs)
    yhat = predict(X, i, j, cfg)
    lo, hi = cfg.prediction_range
    if yhat < lo - CLAMP_SLACK or yhat > hi + CLAMP_SLACK:
        raise InvariantViolation(f"prediction {yhat} outside range [{lo}, {hi}]")
    yhat = min(max(yhat, lo), hi)

    loss = float(loss_fn.value(yhat))
    g = float(loss_fn.subgradient(yhat))
    L = loss_matrix(g, i, j, cfg)
    session.max_eta_norm = max(session.max_eta_norm, cfg.eta * abs(g))

    state = OloState(X=X, eta=cfg.eta, tau=cfg.tau, N=2 * cfg.p, round=session.round)
    session.pending = exp_step(state, L)
    session.last_X = X
    session.history.append(LossEvent(t=session.round, i=i, j=j, yhat=yhat, g=g, loss=loss))
    session.round += 1
    return yhat, session


def embed_phi(d: Decomposition) -> np.ndarray:
    """Block-diagonal embedding diag(P, N) of a decomposition; the feasible
    comparator point in the OLO problem."""
    p = d.order
    Phi = np.zeros((2 * p, 2 * p))
    Phi[:p, :p] = d.P
    Phi[p:, p:] = d.N
    return Phi


def _check_indices(i: int, j: int, cfg: OmpConfig):
    if not (1 <= i <= cfg.m and 1 <= j <= cfg.n):
        raise IndexError(f"entry ({i}, {j}) outside [1..{cfg.m}] x [1..{cfg.n}]")
