"""
Shipped objectives: the L1 distance used by both experiments, Gaussian noisy
subgradients, the Lipschitz extension over a candidate set and the exact
penalty builder for network utility problems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from core import (
    Array,
    ArgumentError,
    DimensionError,
    Objective,
    StochasticOracle,
    as_point,
    check_shape,
)


def l1_value_subgrad(omega: Array, x: Array) -> tuple[float, Array]:
    """||x - omega||_1 and the subgradient sign(x - omega), with sign(0) = 0."""
    check_shape(x, omega)
    diff = np.asarray(x, dtype=np.float64) - omega
    return float(np.sum(np.abs(diff))), np.sign(diff)


def hypercube_l1_optimum(omega: Array) -> tuple[Array, float]:
    """Minimizer and minimum of ||x - omega||_1 over [-1, 1]^n."""
    omega = np.asarray(omega, dtype=np.float64)
    x_star = np.clip(omega, -1.0, 1.0)
    f_star = float(np.sum(np.maximum(np.abs(omega) - 1.0, 0.0)))
    return x_star, f_star


class L1DistanceObjective(Objective):
    """f(x) = sum |x_ij - omega_ij| with G = sqrt(number of entries)."""

    def __init__(self, omega: Array):
        self.omega = as_point(omega)
        self.lipschitz = math.sqrt(self.omega.size)

    def value(self, x: Array) -> float:
        return l1_value_subgrad(self.omega, x)[0]

    def subgrad(self, x: Array) -> Array:
        return l1_value_subgrad(self.omega, x)[1]


class MinRateObjective(Objective):
    """f(x) = -min_i x_i, the negated max-min fairness utility.

    Subgradient is -e_i for the smallest index attaining the minimum.
    """

    lipschitz = 1.0

    def value(self, x: Array) -> float:
        return -float(np.min(x))

    def subgrad(self, x: Array) -> Array:
        g = np.zeros_like(x, dtype=np.float64)
        g.flat[int(np.argmin(x))] = -1.0
        return g


class LinearUtilityObjective(Objective):
    """f(x) = -<w, x>."""

    def __init__(self, weights: Array):
        self.weights = np.array(weights, dtype=np.float64)
        norm = float(np.linalg.norm(self.weights))
        if norm == 0.0:
            raise ArgumentError("utility weights must not all be zero")
        self.lipschitz = norm

    def value(self, x: Array) -> float:
        check_shape(x, self.weights)
        return -float(np.vdot(self.weights, x))

    def subgrad(self, x: Array) -> Array:
        check_shape(x, self.weights)
        return -self.weights.copy()


# ---------------------------------------------------------------------------
# Noise
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianNoiseSpec:
    sigma: float
    seed: int

    def __post_init__(self):
        if not (self.sigma >= 0 and math.isfinite(self.sigma)):
            raise ArgumentError(f"sigma must be nonnegative, got {self.sigma}")


def noisy_subgrad(base: Objective, spec: GaussianNoiseSpec, x: Array, rng: np.random.Generator) -> Array:
    """base.subgrad(x) + N with N ~ Normal(0, sigma^2 I).

    N comes from ``rng.standard_normal`` (numpy's ziggurat transform of the
    generator's uniform stream), scaled by sigma. sigma = 0 draws nothing.
    """
    g = base.subgrad(x)
    if spec.sigma == 0.0:
        return g
    return g + spec.sigma * rng.standard_normal(g.shape)


class GaussianNoiseOracle(StochasticOracle):
    """Gaussian-perturbed subgradients with B = sqrt(G^2 + dim * sigma^2)."""

    def __init__(self, base: Objective, spec: GaussianNoiseSpec, dim: int):
        self.base = base
        self.spec = spec
        self.seed = spec.seed
        self.dim = int(dim)
        self.second_moment = math.sqrt(base.lipschitz ** 2 + self.dim * spec.sigma ** 2)

    def noisy_subgrad(self, x: Array, rng: np.random.Generator) -> Array:
        return noisy_subgrad(self.base, self.spec, x, rng)


# ---------------------------------------------------------------------------
# Lipschitz extension
# ---------------------------------------------------------------------------

class LipschitzExtension:
    """f~(w) = min over candidates x of f(x) + G ||x - w||.

    An upper bound on the inf over the whole set, exact when the candidates
    are the set. Candidate values are computed once.
    """

    def __init__(self, f: Callable[[Array], float], G: float, candidates: Sequence[Array]):
        if len(candidates) == 0:
            raise ArgumentError("candidate list is empty")
        if not G > 0:
            raise ArgumentError(f"G must be positive, got {G}")
        self.G = float(G)
        self.f = f
        self.candidates = np.array(candidates, dtype=np.float64)
        self._flat = self.candidates.reshape(len(self.candidates), -1)
        self.values = np.array([f(c) for c in self.candidates], dtype=np.float64)

    def __call__(self, w: Array) -> float:
        w = np.asarray(w, dtype=np.float64)
        if w.shape != self.candidates.shape[1:]:
            raise DimensionError(f"point shape {w.shape} does not match candidates {self.candidates.shape[1:]}")
        hits = np.flatnonzero(np.all(self._flat == w.ravel(), axis=1))
        if hits.size:
            return float(self.values[hits[0]])
        dist = np.linalg.norm(self._flat - w.ravel(), axis=1)
        return float(np.min(self.values + self.G * dist))


def lipschitz_extend(f: Callable[[Array], float], G: float, candidates: Sequence[Array], w: Array) -> float:
    return LipschitzExtension(f, G, candidates)(w)


# ---------------------------------------------------------------------------
# Exact penalty
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PenaltySpec:
    """Constraints <a_j, x> <= b_j folded into gamma * max(0, max_j violation)."""

    a: Array
    b: Array
    gamma: float

    @classmethod
    def from_pairs(cls, constraints: Sequence[tuple[Array, float]], gamma: float) -> "PenaltySpec":
        if not (gamma >= 0 and math.isfinite(gamma)):
            raise ArgumentError(f"gamma must be nonnegative, got {gamma}")
        if len(constraints) == 0:
            return cls(a=np.zeros((0, 0)), b=np.zeros(0), gamma=float(gamma))
        a = np.array([np.asarray(aj, dtype=np.float64) for aj, _ in constraints])
        b = np.array([float(bj) for _, bj in constraints])
        return cls(a=a, b=b, gamma=float(gamma))

    @property
    def max_row_norm(self) -> float:
        if self.a.shape[0] == 0:
            return 0.0
        return float(np.max(np.linalg.norm(self.a.reshape(self.a.shape[0], -1), axis=1)))


def penalize(base: Objective, spec: PenaltySpec, x: Array) -> tuple[float, Array]:
    value = base.value(x)
    g = base.subgrad(x)
    if spec.gamma == 0.0 or spec.a.shape[0] == 0:
        return value, g
    if spec.a.shape[1:] != np.shape(x):
        raise DimensionError(f"constraint shape {spec.a.shape[1:]} does not match point {np.shape(x)}")
    slack = spec.a.reshape(spec.a.shape[0], -1) @ np.ravel(x) - spec.b
    j = int(np.argmax(slack))
    if slack[j] <= 0.0:
        return value, g
    return value + spec.gamma * float(slack[j]), g + spec.gamma * spec.a[j]


class PenalizedObjective(Objective):
    """base + gamma * max(0, max_j <a_j, x> - b_j), G = G_base + gamma * max_j ||a_j||."""

    def __init__(self, base: Objective, spec: PenaltySpec):
        self.base = base
        self.spec = spec
        self.lipschitz = base.lipschitz + spec.gamma * spec.max_row_norm

    def value(self, x: Array) -> float:
        return penalize(self.base, self.spec, x)[0]

    def subgrad(self, x: Array) -> Array:
        return penalize(self.base, self.spec, x)[1]

    def violation(self, x: Array) -> float:
        if self.spec.a.shape[0] == 0:
            return 0.0
        slack = self.spec.a.reshape(self.spec.a.shape[0], -1) @ np.ravel(x) - self.spec.b
        return max(float(np.max(slack)), 0.0)
