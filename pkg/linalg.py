"""
Dense linear algebra for the nuclear-norm ball: leading singular triplet by
power iteration and a guarded full SVD.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from core import Array, DimensionError, NumericError

logger = logging.getLogger(__name__)

MAX_SVD_DIM = 512


@dataclass(frozen=True)
class SvdTriplet:
    u: Array
    s: float
    v: Array
    degenerate: bool = False


@dataclass(frozen=True)
class FullSvd:
    U: Array
    S: Array
    V: Array

    @property
    def nuclear_norm(self) -> float:
        return float(np.sum(self.S))


def _as_matrix(A) -> Array:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NumericError("matrix has non-finite entries")
    return A


def _start_vector(size: int) -> Array:
    # all-ones with a fixed irrational wobble so structured inputs are unlikely
    # to be orthogonal to the leading vector
    x = np.ones(size) + 0.5 * np.cos(np.arange(size) * (1.0 + np.sqrt(5.0)))
    return x / np.linalg.norm(x)


def _flip_sign(u: Array, v: Array) -> tuple[Array, Array]:
    nonzero = np.flatnonzero(u)
    if nonzero.size and u[nonzero[0]] < 0:
        return -u, -v
    return u, v


def _out_of_budget(step: float, prev_step: float, tol: float, remaining: int) -> bool:
    """True when the observed contraction cannot bring the step under tol within remaining iterations."""
    rate = step / prev_step
    if rate >= 1.0:
        return True
    if tol <= 0.0:
        return False
    return math.log(tol / step) / math.log(rate) > remaining


def top_singular_triplet(A, tol: float = 1e-10, max_iter: int = 5000) -> SvdTriplet:
    """Leading singular triplet of A by power iteration on the smaller Gram matrix.

    Deterministic for a fixed A. The first nonzero entry of u is positive.
    A zero matrix gives s=0 with unit basis vectors and ``degenerate=True``.
    """
    A = _as_matrix(A)
    m, n = A.shape
    if not np.any(A):
        return SvdTriplet(u=np.eye(m)[0], s=0.0, v=np.eye(n)[0], degenerate=True)

    left = m <= n
    gram = A @ A.T if left else A.T @ A
    x = _start_vector(gram.shape[0])
    restarts = 0
    lam = prev_step = None
    for it in range(1, max_iter + 1):
        y = gram @ x
        y_norm = float(np.linalg.norm(y))
        if y_norm == 0.0:
            # start vector in the null space: walk through the basis
            if restarts >= gram.shape[0]:
                raise NumericError("power iteration stalled on every start vector", iterations=it)
            logger.warning("power iteration stalled, restarting from basis vector %d", restarts)
            x = np.eye(gram.shape[0])[restarts]
            restarts += 1
            lam = prev_step = None
            continue
        y /= y_norm
        step = float(np.linalg.norm(y - x))
        x = y
        if step <= tol:
            break
        if (lam is not None and abs(y_norm - lam) <= tol * y_norm
                and _out_of_budget(step, prev_step, tol, max_iter - it)):
            # near-tied leading pair: the estimate has settled, the vector drifts inside the cluster
            logger.debug("eigenvalue estimate settled after %d iterations (step %.3g)", it, step)
            break
        lam, prev_step = y_norm, step
    else:
        raise NumericError(f"power iteration did not converge in {max_iter} iterations", iterations=max_iter)

    logger.debug("power iteration converged after %d iterations", it)
    if left:
        u = x
        w = A.T @ u
        s = float(np.linalg.norm(w))
        v = w / s
    else:
        v = x
        w = A @ v
        s = float(np.linalg.norm(w))
        u = w / s
    u, v = _flip_sign(u, v)
    return SvdTriplet(u=u, s=s, v=v)


def full_svd(A) -> FullSvd:
    """Complete SVD A = U diag(S) V^T with S descending; desk-scale only."""
    A = _as_matrix(A)
    if max(A.shape) > MAX_SVD_DIM:
        raise DimensionError(f"full_svd is limited to {MAX_SVD_DIM} rows/columns, got {A.shape}")
    try:
        U, S, Vt = np.linalg.svd(A, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD did not converge: {exc}") from exc
    return FullSvd(U=U, S=S, V=Vt.T)


def singular_values(A) -> Array:
    A = _as_matrix(A)
    try:
        return np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD did not converge: {exc}") from exc


def nuclear_norm(A) -> float:
    return float(np.sum(singular_values(A)))
