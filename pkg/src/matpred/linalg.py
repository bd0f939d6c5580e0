"""Dense symmetric linear algebra.

Everything downstream (decompositions, the multiplicative-weights engine,
the entropy projection) runs through the handful of spectral primitives in
this module: symmetrization of rectangular matrices, eigendecomposition,
spectral matrix functions (exp / log), the trace norm, and the quantum
relative entropy.

Matrices are plain float ndarrays. Symmetric matrices are kept canonical by
averaging with the transpose after every spectral round-trip, which removes
the slow drift that otherwise accumulates.
"""

from __future__ import annotations

import numpy as np

# Relative floor applied to eigenvalues before a matrix logarithm.  The
# projection can push eigenvalues to numerical zero and the iterates must
# stay inside log's domain.
LOG_FLOOR_REL = 1e-12


class DomainError(ValueError):
    """Input outside an operation's domain (e.g. log of a singular matrix)."""


def sym_average(M: np.ndarray) -> np.ndarray:
    """Canonical symmetric representative (M + M.T) / 2."""
    return 0.5 * (M + M.T)


def sym_block(W: np.ndarray) -> np.ndarray:
    """The (m+n) x (m+n) block embedding [[0, W], [W.T, 0]]."""
    W = np.asarray(W, dtype=float)
    m, n = W.shape
    S = np.zeros((m + n, m + n))
    S[:m, m:] = W
    S[m:, :m] = W.T
    return S


def symmetrize(W: np.ndarray) -> np.ndarray:
    """Symmetrize W: identity on exactly-symmetric square matrices,
    block embedding [[0, W], [W.T, 0]] otherwise."""
    W = np.asarray(W, dtype=float)
    if not np.all(np.isfinite(W)):
        raise DomainError("symmetrize: non-finite entries")
    if W.shape[0] == W.shape[1] and np.array_equal(W, W.T):
        return W.copy()
    return sym_block(W)


def eig_sym(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix.

    Returns (lam, V) with eigenvalues sorted descending and orthonormal
    eigenvector columns, so that M = V @ diag(lam) @ V.T.
    """
    lam, V = np.linalg.eigh(sym_average(np.asarray(M, dtype=float)))
    idx = np.argsort(lam)[::-1]
    return lam[idx], V[:, idx]


def matrix_fn(M: np.ndarray, f, *, floor: float | None = None) -> np.ndarray:
    """Apply a scalar function to the spectrum: V diag(f(lam)) V.T.

    If `floor` is given, eigenvalues are clipped from below first (used to
    keep matrix logarithms well defined).
    """
    lam, V = eig_sym(M)
    if floor is not None:
        lam = np.maximum(lam, floor)
    return sym_average((V * f(lam)) @ V.T)


def matrix_exp(M: np.ndarray) -> np.ndarray:
    return matrix_fn(M, np.exp)


def matrix_log(M: np.ndarray, *, flooring: bool = True) -> np.ndarray:
    """Matrix logarithm of a (nearly) positive definite symmetric matrix.

    With flooring enabled, eigenvalues are raised to
    LOG_FLOOR_REL * max(1, lam_max) before taking logs. With flooring
    disabled, a non-positive eigenvalue raises DomainError.
    """
    lam, V = eig_sym(M)
    eps = LOG_FLOOR_REL * max(1.0, float(lam[0]) if lam.size else 1.0)
    if flooring:
        lam = np.maximum(lam, eps)
    elif lam.size and lam[-1] <= eps:
        raise DomainError(f"matrix_log: eigenvalue {lam[-1]} at or below floor {eps}")
    return sym_average((V * np.log(lam)) @ V.T)


def trace_norm(W: np.ndarray) -> float:
    """Sum of singular values, computed through the spectrum of sym(W).

    For a symmetric matrix this is the sum of absolute eigenvalues; for the
    block embedding the spectrum is {+/- sigma_k} union {0}, so the trace
    norm of W is half the absolute eigenvalue sum of sym(W).
    """
    W = np.asarray(W, dtype=float)
    S = symmetrize(W)
    total = float(np.sum(np.abs(np.linalg.eigvalsh(S))))
    if S.shape == W.shape and np.array_equal(S, W):
        return total
    return 0.5 * total


def inner(A: np.ndarray, B: np.ndarray) -> float:
    """Frobenius inner product A . B = sum_ij A(i,j) B(i,j)."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape:
        raise ValueError(f"inner: order mismatch {A.shape} vs {B.shape}")
    return float(np.sum(A * B))


def qre(X: np.ndarray, A: np.ndarray) -> float:
    """Quantum relative entropy Tr(X log X - X log A - X + A).

    X must be PSD (tiny negative eigenvalues are treated as zero, with the
    0 log 0 = 0 convention); A is floored to stay positive definite.
    """
    X = np.asarray(X, dtype=float)
    A = np.asarray(A, dtype=float)
    if X.shape != A.shape:
        raise ValueError(f"qre: order mismatch {X.shape} vs {A.shape}")
    lam, _ = eig_sym(X)
    lam = np.maximum(lam, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        xlogx = np.where(lam > 0.0, lam * np.log(np.where(lam > 0.0, lam, 1.0)), 0.0)
    tr_xlogx = float(np.sum(xlogx))
    tr_xloga = inner(X, matrix_log(A))
    return tr_xlogx - tr_xloga - float(np.trace(X)) + float(np.trace(A))
