"""
Concrete feasible sets: the [-1, 1]^n hypercube, the nuclear-norm ball and a
polytope given by its vertex list.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from core import Array, ArgumentError, DimensionError, FeasibleSet, check_shape
from linalg import full_svd, nuclear_norm, top_singular_triplet


def hypercube_lmo(d: Array) -> Array:
    """Vertex of [-1, 1]^n minimizing <d, x>; coordinates with d_i = 0 stay at 0."""
    return -np.sign(np.asarray(d, dtype=np.float64))


def hypercube_project(z: Array) -> Array:
    return np.clip(np.asarray(z, dtype=np.float64), -1.0, 1.0)


def nuclear_lmo(A: Array, tau: float) -> Array:
    """-tau * u1 v1^T, the minimizer of <A, X> over ||X||_* <= tau."""
    A = np.asarray(A, dtype=np.float64)
    if not np.any(A):
        return np.zeros_like(A)
    top = top_singular_triplet(A)
    return -tau * np.outer(top.u, top.v)


def water_filling_threshold(s: Array, tau: float) -> float:
    """lambda >= 0 with sum(max(0, s_i - lambda)) = tau, for s sorted descending.

    Exact: the active prefix is found from cumulative sums, then lambda solves
    the linear equation on that prefix.
    """
    cssv = np.cumsum(s) - tau
    ind = np.arange(1, s.size + 1)
    rho = np.count_nonzero(s - cssv / ind > 0)
    return max(float(cssv[rho - 1] / rho), 0.0)


def nuclear_project(A: Array, tau: float) -> Array:
    """Euclidean projection onto {X : ||X||_* <= tau} by singular value water-filling."""
    A = np.asarray(A, dtype=np.float64)
    svd = full_svd(A)
    if svd.nuclear_norm <= tau:
        return A
    lam = water_filling_threshold(svd.S, tau)
    shrunk = np.maximum(svd.S - lam, 0.0)
    k = shrunk.size
    return (svd.U[:, :k] * shrunk) @ svd.V[:, :k].T


def polytope_lmo(vertices: Array, d: Array) -> Array:
    """Vertex minimizing <d, v>; ties go to the lowest index."""
    vertices = np.asarray(vertices, dtype=np.float64)
    if vertices.shape[0] == 0:
        raise ArgumentError("vertex list is empty")
    d = np.asarray(d, dtype=np.float64)
    if vertices.shape[1:] != d.shape:
        raise DimensionError(f"direction shape {d.shape} does not match vertices {vertices.shape[1:]}")
    scores = vertices.reshape(vertices.shape[0], -1) @ d.ravel()
    return vertices[int(np.argmin(scores))].copy()


class HypercubeSet(FeasibleSet):
    """X = [-1, 1]^n inside the ball of radius 2 sqrt(n) around the origin."""

    def __init__(self, n: int):
        if n < 1:
            raise ArgumentError(f"dimension must be positive, got {n}")
        self.n = int(n)
        self.center = np.zeros(self.n)
        self.radius = 2.0 * math.sqrt(self.n)
        self.name = f"hypercube(n={self.n})"

    def lmo(self, d: Array) -> Array:
        check_shape(d, self.center)
        return hypercube_lmo(d)

    @property
    def has_projection(self) -> bool:
        return True

    def project(self, z: Array) -> Array:
        check_shape(z, self.center)
        return hypercube_project(z)

    def contains(self, x: Array, tol: float = 1e-9) -> bool:
        check_shape(x, self.center)
        return bool(np.max(np.abs(x)) <= 1.0 + tol)


class NuclearBallSet(FeasibleSet):
    """m x n matrices with nuclear norm at most tau; centered at 0 with R = tau."""

    def __init__(self, m: int, n: int, tau: float):
        if m < 1 or n < 1:
            raise ArgumentError(f"matrix dimensions must be positive, got {m}x{n}")
        if not tau > 0:
            raise ArgumentError(f"tau must be positive, got {tau}")
        self.m, self.n, self.tau = int(m), int(n), float(tau)
        self.center = np.zeros((self.m, self.n))
        self.radius = self.tau
        self.name = f"nuclear_ball({self.m}x{self.n}, tau={self.tau:g})"

    def lmo(self, d: Array) -> Array:
        check_shape(d, self.center)
        return nuclear_lmo(d, self.tau)

    @property
    def has_projection(self) -> bool:
        return True

    def project(self, z: Array) -> Array:
        check_shape(z, self.center)
        return nuclear_project(z, self.tau)

    def contains(self, x: Array, tol: float = 1e-7) -> bool:
        check_shape(x, self.center)
        return nuclear_norm(x) <= self.tau + tol


class VertexPolytopeSet(FeasibleSet):
    """Convex hull of a finite vertex list; x1 is the first vertex."""

    def __init__(self, vertices: Sequence[Array]):
        if len(vertices) == 0:
            raise ArgumentError("vertex list is empty")
        first_shape = np.shape(vertices[0])
        if any(np.shape(v) != first_shape for v in vertices):
            raise DimensionError("all vertices must share one shape")
        self.vertices = np.array(vertices, dtype=np.float64)
        self.vertices.flags.writeable = False
        self.center = self.vertices[0]
        offsets = (self.vertices - self.center).reshape(len(self.vertices), -1)
        self.radius = float(np.max(np.linalg.norm(offsets, axis=1)))
        self.name = f"polytope({len(self.vertices)} vertices)"

    @classmethod
    def capped_simplex(cls, n: int, capacity: float) -> "VertexPolytopeSet":
        """{x >= 0, sum(x) <= capacity}: the origin followed by capacity * e_i."""
        if n < 1 or not capacity > 0:
            raise ArgumentError(f"need n >= 1 and capacity > 0, got n={n}, capacity={capacity}")
        return cls([np.zeros(n)] + [capacity * e for e in np.eye(n)])

    def lmo(self, d: Array) -> Array:
        return polytope_lmo(self.vertices, d)
