"""Online linear optimization over PSD matrices.

The engine takes exponentiated-gradient steps exp(log X - eta L) and then
Bregman-projects back onto a small linear-constraint polytope, using the
dual form of the quantum-relative-entropy projection: the projected point is
X* = exp(log Y - sum_j alpha_j A_j) with nonnegative duals alpha maximizing
-Tr(exp(log Y - sum alpha_j A_j)) - sum alpha_j b_j.

The dual has at most a handful of variables, so it is solved by cyclic
coordinate ascent with scalar bisection; the trace constraint (A = I) has a
closed-form coordinate update. Duals live in [0, 3 tau] for constraints
with b >= 1; a homogeneous constraint (b < 1) gets a widened box.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .linalg import eig_sym, inner, matrix_log, sym_average


class ProjectionError(RuntimeError):
    """Dual solver failed to reach tolerance within the iteration cap."""


@dataclass(frozen=True)
class LinConstraint:
    """A linear constraint A . X <= b with symmetric A.

    The dual range analysis assumes b >= 1; constraints with smaller b are
    accepted but solved over a widened dual box (see project_qre).
    """

    A: np.ndarray
    b: float


@dataclass(frozen=True)
class ConstraintSet:
    """An ordered collection of linear constraints on matrices of one order.

    `tau` is the trace scale of the ambient problem and sets the dual search
    box [0, 3 tau].
    """

    constraints: tuple
    order: int
    tau: float

    def __post_init__(self):
        for c in self.constraints:
            if c.A.shape != (self.order, self.order):
                raise ValueError("constraint matrix order mismatch")


@dataclass(frozen=True)
class OloState:
    X: np.ndarray
    eta: float
    tau: float
    N: int
    round: int


def init_state(tau: float, N: int, eta: float) -> OloState:
    """Initial iterate (tau / N) I at round 1."""
    if tau <= 0 or N < 1 or eta <= 0:
        raise ValueError("init_state: need tau > 0, N >= 1, eta > 0")
    return OloState(X=(tau / N) * np.eye(N), eta=eta, tau=tau, N=N, round=1)


def exp_step(state: OloState, L: np.ndarray) -> np.ndarray:
    """The unprojected update exp(log X - eta L)."""
    L = np.asarray(L, dtype=float)
    if L.shape != state.X.shape:
        raise ValueError("exp_step: loss matrix order mismatch")
    lam, V = eig_sym(matrix_log(state.X) - state.eta * L)
    return sym_average((V * np.exp(lam)) @ V.T)


def _exp_of(B: np.ndarray) -> np.ndarray:
    lam, V = eig_sym(B)
    return sym_average((V * np.exp(lam)) @ V.T)


def _dual_box(c: LinConstraint, tau: float, order: int) -> float:
    if c.b >= 1.0:
        return 3.0 * tau
    # Homogeneous constraints (b < 1) fall outside the b >= 1 range
    # argument; the exponential decay of the objective still keeps the
    # optimum finite, in a slightly larger box.
    return 3.0 * tau + np.log(max(3.0 * tau * order, 2.0))


def dual_objective(Y: np.ndarray, cs: ConstraintSet, alpha: np.ndarray) -> float:
    """The concave dual value -Tr(exp(log Y - sum alpha_j A_j)) - sum alpha_j b_j."""
    alpha = np.asarray(alpha, dtype=float)
    B = matrix_log(Y)
    for a, c in zip(alpha, cs.constraints):
        B = B - a * c.A
    return -float(np.trace(_exp_of(B))) - float(sum(a * c.b for a, c in zip(alpha, cs.constraints)))


def dual_gradient(Y: np.ndarray, cs: ConstraintSet, alpha: np.ndarray) -> np.ndarray:
    """Gradient of the dual in alpha_j: A_j . X(alpha) - b_j."""
    alpha = np.asarray(alpha, dtype=float)
    B = matrix_log(Y)
    for a, c in zip(alpha, cs.constraints):
        B = B - a * c.A
    X = _exp_of(B)
    return np.array([inner(c.A, X) - c.b for c in cs.constraints])


def project_qre(Y: np.ndarray, cs: ConstraintSet, tol: float = 1e-7,
                max_sweeps: int = 200) -> tuple[np.ndarray, np.ndarray]:
    """Quantum-relative-entropy projection of Y onto the polytope of cs.

    Returns (X*, duals). X* = exp(log Y - sum alpha_j A_j) is automatically
    positive definite; on success it is primal feasible and satisfies
    complementary slackness, both within tol * (1 + |b_j|) per constraint.
    """
    m = len(cs.constraints)
    logY = matrix_log(Y)
    alpha = np.zeros(m)
    if m == 0:
        return _exp_of(logY), alpha

    identity = np.eye(cs.order)
    is_identity = [np.array_equal(c.A, identity) for c in cs.constraints]
    boxes = [_dual_box(c, cs.tau, cs.order) for c in cs.constraints]

    # Fast path: Y itself (after eigenvalue flooring) may already be feasible.
    X = _exp_of(logY)
    if all(inner(c.A, X) <= c.b + tol * (1.0 + abs(c.b)) for c in cs.constraints):
        return X, alpha

    weighted = sum(a * c.A for a, c in zip(alpha, cs.constraints))
    for _ in range(max_sweeps):
        for j, c in enumerate(cs.constraints):
            B = logY - (weighted - alpha[j] * c.A)
            if is_identity[j]:
                # exp(B - a I) = e^{-a} exp(B): the coordinate solves in
                # closed form.
                tr = float(np.trace(_exp_of(B)))
                new = 0.0 if tr <= c.b else min(float(np.log(tr / c.b)), boxes[j])
            else:
                new = _bisect_coordinate(B, c, boxes[j], tol)
            weighted = weighted + (new - alpha[j]) * c.A
            alpha[j] = new
        X = _exp_of(logY - weighted)
        vals = np.array([inner(c.A, X) for c in cs.constraints])
        primal = max(
            max(float((vals[j] - cs.constraints[j].b) / (1.0 + abs(cs.constraints[j].b)))
                for j in range(m)),
            0.0,
        )
        slack = max(
            (alpha[j] * (cs.constraints[j].b - vals[j]) / (1.0 + abs(cs.constraints[j].b))
             for j in range(m)),
            default=0.0,
        )
        if primal <= tol and slack <= tol:
            return sym_average(X), alpha
    raise ProjectionError(
        f"projection did not converge: primal violation {primal:.3e}, "
        f"complementary slackness {slack:.3e}, duals {alpha}"
    )


def _bisect_coordinate(B: np.ndarray, c: LinConstraint, hi: float, tol: float) -> float:
    """Solve A . exp(B - a A) = b for a in [0, hi]; the gradient is
    monotone decreasing in a, so plain bisection applies."""

    def g(a):
        return inner(c.A, _exp_of(B - a * c.A)) - c.b

    gtol = 0.1 * tol * max(1.0, abs(c.b))
    if g(0.0) <= gtol:
        return 0.0
    if g(hi) > 0.0:
        return hi  # box edge; final KKT check reports if this is a failure
    lo_a, hi_a = 0.0, hi
    for _ in range(80):
        mid = 0.5 * (lo_a + hi_a)
        gm = g(mid)
        if abs(gm) <= gtol:
            return mid
        if gm > 0.0:
            lo_a = mid
        else:
            hi_a = mid
        if hi_a - lo_a <= 1e-14 * max(1.0, hi):
            break
    return 0.5 * (lo_a + hi_a)


def olo_round(state: OloState, L: np.ndarray, cs: ConstraintSet,
              tol: float = 1e-7) -> tuple[float, OloState]:
    """One round of the OLO protocol: pay X . L, then step and project."""
    loss = inner(state.X, L)
    Y = exp_step(state, L)
    X_new, _ = project_qre(Y, cs, tol=tol)
    return loss, replace(state, X=X_new, round=state.round + 1)
