"""
Domain types, oracle contracts and parameter schedules shared by all solvers.

Points are float64 numpy arrays. A vector has shape (n,), a matrix keeps its
(m, n) shape and is treated as its row-major flattening, so the inner product
of two matrices is the Frobenius inner product.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

logger = logging.getLogger(__name__)

Array = NDArray[np.float64]


class OptimizationError(Exception):
    """Base class for every error raised by this library."""


class DimensionError(OptimizationError, ValueError):
    pass


class ArgumentError(OptimizationError, ValueError):
    pass


class NumericError(OptimizationError, ArithmeticError):
    def __init__(self, message: str, iterations: Optional[int] = None):
        super().__init__(message)
        self.iterations = iterations


class UnsupportedSetError(OptimizationError, TypeError):
    pass


class SolverError(OptimizationError, RuntimeError):
    """A run aborted at iteration k."""

    def __init__(self, message: str, k: int):
        super().__init__(f"iteration {k}: {message}")
        self.k = k


# ---------------------------------------------------------------------------
# RealVector helpers
# ---------------------------------------------------------------------------

def as_point(data: ArrayLike, shape: Optional[tuple[int, ...]] = None) -> Array:
    """Copy data into a read-only float64 array, checking shape and finiteness."""
    arr = np.array(data, dtype=np.float64)
    if shape is not None:
        if arr.size != math.prod(shape):
            raise DimensionError(f"expected {math.prod(shape)} entries for shape {shape}, got {arr.size}")
        arr = arr.reshape(shape)
    if arr.ndim not in (1, 2):
        raise DimensionError(f"points must be vectors or matrices, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise NumericError("point has non-finite entries")
    arr.flags.writeable = False
    return arr


def check_shape(a: Array, b: Array) -> None:
    if np.shape(a) != np.shape(b):
        raise DimensionError(f"shape mismatch: {np.shape(a)} vs {np.shape(b)}")


def inner(a: Array, b: Array) -> float:
    """Euclidean (Frobenius for matrices) inner product."""
    check_shape(a, b)
    return float(np.vdot(a, b))


def norm(a: Array) -> float:
    return float(np.linalg.norm(np.ravel(a)))


# ---------------------------------------------------------------------------
# Oracle contracts
# ---------------------------------------------------------------------------

class FeasibleSet(ABC):
    """A compact convex set reachable through its linear minimization oracle.

    Subclasses set ``center`` (the point x1) and ``radius`` (R) so that every
    feasible x satisfies ||x - center|| <= radius.
    """

    center: Array
    radius: float
    name: str = "set"

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    @property
    def shape(self) -> tuple[int, ...]:
        return self.center.shape

    @abstractmethod
    def lmo(self, d: Array) -> Array:
        """Return a minimizer of <d, x> over the set."""

    @property
    def has_projection(self) -> bool:
        return False

    def project(self, z: Array) -> Array:
        raise UnsupportedSetError(f"{self.name} has no projection oracle")

    def contains(self, x: Array, tol: float = 1e-9) -> bool:
        raise UnsupportedSetError(f"{self.name} has no membership test")


class Objective(ABC):
    """Convex G-Lipschitz function given by a value and a subgradient oracle."""

    lipschitz: float

    @abstractmethod
    def value(self, x: Array) -> float:
        ...

    @abstractmethod
    def subgrad(self, x: Array) -> Array:
        ...


class FunctionObjective(Objective):
    """Objective assembled from plain callables."""

    def __init__(self, value: Callable[[Array], float], subgrad: Callable[[Array], Array], lipschitz: float):
        if not lipschitz > 0:
            raise ArgumentError(f"lipschitz must be positive, got {lipschitz}")
        self._value = value
        self._subgrad = subgrad
        self.lipschitz = float(lipschitz)

    def value(self, x: Array) -> float:
        return float(self._value(x))

    def subgrad(self, x: Array) -> Array:
        return np.asarray(self._subgrad(x), dtype=np.float64)


class StochasticOracle(ABC):
    """Unbiased noisy subgradients of ``base`` with E||g||^2 <= second_moment^2."""

    base: Objective
    second_moment: float
    seed: int

    def make_rng(self) -> np.random.Generator:
        return make_rng(self.seed)

    @abstractmethod
    def noisy_subgrad(self, x: Array, rng: np.random.Generator) -> Array:
        ...


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator keyed by a 64-bit seed and a stream id."""
    if not 0 <= int(seed) < 2**64:
        raise ArgumentError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream)])))


# ---------------------------------------------------------------------------
# Parameter schedules
# ---------------------------------------------------------------------------

class StochasticSchedule(str, Enum):
    WITH_G = "with_G"
    B_ONLY = "B_only"


@dataclass(frozen=True)
class PfwParams:
    alpha: float
    eta: float
    horizon_T: int

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ArgumentError(f"alpha must be positive, got {self.alpha}")
        if not (self.eta > 0 and math.isfinite(self.eta)):
            raise ArgumentError(f"eta must be positive, got {self.eta}")
        if int(self.horizon_T) != self.horizon_T or self.horizon_T < 1:
            raise ArgumentError(f"horizon_T must be a positive integer, got {self.horizon_T}")


@dataclass(frozen=True)
class PgdParams:
    beta: float
    horizon_T: int


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not (value > 0 and math.isfinite(value)):
            raise ArgumentError(f"{name} must be positive, got {value}")


def _require_horizon(T: int) -> None:
    if int(T) != T or T < 1:
        raise ArgumentError(f"T must be a positive integer, got {T}")


def params_deterministic(G: float, R: float, T: int) -> PfwParams:
    _require_positive(G=G, R=R)
    _require_horizon(T)
    root_T = math.sqrt(T)
    return PfwParams(alpha=G * root_T / R, eta=G / (2.0 * R * root_T), horizon_T=int(T))


def params_stochastic(G: float, B: float, R: float, T: int,
                      mode: StochasticSchedule | str = StochasticSchedule.WITH_G) -> PfwParams:
    _require_positive(G=G, B=B, R=R)
    _require_horizon(T)
    if B < G:
        raise ArgumentError(f"second-moment bound B={B} must be at least G={G}")
    mode = StochasticSchedule(mode)
    root_T = math.sqrt(T)
    alpha = B * root_T / R
    if mode is StochasticSchedule.WITH_G:
        eta = G / (2.0 * R * root_T)
    else:
        eta = 2.0 * B / (R * root_T)
    return PfwParams(alpha=alpha, eta=eta, horizon_T=int(T))


def pgd_step_size(G: float, R: float, T: int) -> float:
    _require_positive(G=G, R=R)
    _require_horizon(T)
    return R / (G * math.sqrt(T))


def sgd_step_size(B: float, R: float, T: int) -> float:
    _require_positive(B=B, R=R)
    _require_horizon(T)
    return R / (B * math.sqrt(T))


# Guarantees on f(xbar) - f(x*) (in expectation for the stochastic ones).

def pfw_bound(G: float, R: float, T: int) -> float:
    return 3.0 * R * G / math.sqrt(T)


def pgd_bound(G: float, R: float, T: int) -> float:
    return R * G / math.sqrt(T)


def pfw_stochastic_bound(G: float, B: float, R: float, T: int,
                         mode: StochasticSchedule | str = StochasticSchedule.WITH_G) -> float:
    if StochasticSchedule(mode) is StochasticSchedule.WITH_G:
        return (B * R + 2.0 * G * R) / math.sqrt(T)
    return 3.0 * B * R / math.sqrt(T)


def sgd_bound(B: float, R: float, T: int) -> float:
    return B * R / math.sqrt(T)
