"""
Projection-free subgradient method and the projected subgradient baselines.

The projection-free loop keeps a drift accumulator Q_k = sum_i (y_i - x_i),
calls the set's LMO on -Q_k to get the next feasible x, and moves y by the
closed-form minimizer of

    <eta Q_k + g_k, y> + alpha/2 ||y - y_k||^2 + eta/2 ||y - x_{k+1}||^2.

The returned point is the average of the x_k, so it stays feasible without
ever projecting.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
import pandas as pd

from core import (
    Array,
    ArgumentError,
    FeasibleSet,
    Objective,
    OptimizationError,
    PfwParams,
    PgdParams,
    SolverError,
    StochasticOracle,
    UnsupportedSetError,
    as_point,
    check_shape,
)

logger = logging.getLogger(__name__)

# Iterates this large only come from a broken oracle.
BLOWUP_LIMIT = 1e12

TRACE_COLUMNS = ["k", "f_y", "q_norm", "wallclock"]


@dataclass(frozen=True)
class IterateState:
    """Snapshot handed to the callback after iteration k.

    For the projection-free loop ``g`` is the subgradient taken at y_k
    (None on the last record, k = T). The baselines leave y and Q unset.
    """

    k: int
    x: Array
    y: Optional[Array]
    Q: Optional[Array]
    sum_x: Array
    g: Optional[Array]


@dataclass(frozen=True)
class RunTrace:
    xbar: Array
    f_xbar: float
    per_iter: pd.DataFrame
    params: Union[PfwParams, PgdParams]

    @property
    def T(self) -> int:
        return self.params.horizon_T


Callback = Callable[[IterateState], None]
SubgradFn = Callable[[Array], Array]


def _check_start(feasible_set: FeasibleSet, x: Array) -> Array:
    x = as_point(x)
    check_shape(x, feasible_set.center)
    try:
        inside = feasible_set.contains(x)
    except UnsupportedSetError:
        return x
    if not inside:
        raise ArgumentError(f"start point is not in {feasible_set.name}")
    return x


def _guard(k: int, name: str, value: Array) -> None:
    if not np.all(np.isfinite(value)):
        raise SolverError(f"{name} has non-finite entries", k)
    if np.max(np.abs(value)) > BLOWUP_LIMIT:
        raise SolverError(f"{name} exceeds {BLOWUP_LIMIT:g} in magnitude", k)


def _frozen(a: Array) -> Array:
    a = np.array(a, dtype=np.float64)
    a.flags.writeable = False
    return a


def _projection_free_loop(objective: Objective, subgrad: SubgradFn, feasible_set: FeasibleSet,
                          params: PfwParams, x1: Array, callback: Optional[Callback]) -> RunTrace:
    x1 = _check_start(feasible_set, x1)
    alpha, eta, T = params.alpha, params.eta, params.horizon_T
    logger.debug("projection-free run on %s: alpha=%g eta=%g T=%d", feasible_set.name, alpha, eta, T)

    x = x1.copy()
    y = x1.copy()
    Q = np.zeros_like(x1)
    sum_x = np.zeros_like(x1)
    f_y = np.empty(T)
    q_norm = np.empty(T)
    wallclock = np.empty(T)
    start = time.perf_counter()

    for k in range(1, T + 1):
        sum_x += x
        Q += y - x
        f_y[k - 1] = objective.value(y)
        q_norm[k - 1] = np.linalg.norm(Q)
        wallclock[k - 1] = time.perf_counter() - start
        if k == T:
            if callback is not None:
                callback(IterateState(k, _frozen(x), _frozen(y), _frozen(Q), _frozen(sum_x), None))
            break
        try:
            g = subgrad(y)
            x_next = feasible_set.lmo(-Q)
        except SolverError:
            raise
        except OptimizationError as exc:
            raise SolverError(str(exc), k) from exc
        y_next = (alpha * y + eta * x_next - eta * Q - g) / (alpha + eta)
        _guard(k, "y", y_next)
        if callback is not None:
            callback(IterateState(k, _frozen(x), _frozen(y), _frozen(Q), _frozen(sum_x), _frozen(g)))
        x, y = x_next, y_next

    xbar = sum_x / T
    per_iter = pd.DataFrame({"k": np.arange(1, T + 1), "f_y": f_y, "q_norm": q_norm, "wallclock": wallclock})
    return RunTrace(xbar=_frozen(xbar), f_xbar=objective.value(xbar), per_iter=per_iter, params=params)


def pfw_run(objective: Objective, feasible_set: FeasibleSet, params: PfwParams, x1: Array,
            callback: Optional[Callback] = None) -> RunTrace:
    """Projection-free subgradient method with exact subgradients g_k = g(y_k).

    Never calls ``feasible_set.project``. With T = 1 the loop body is empty and
    xbar = x1.
    """
    return _projection_free_loop(objective, objective.subgrad, feasible_set, params, x1, callback)


def pfw_run_stochastic(oracle: StochasticOracle, feasible_set: FeasibleSet, params: PfwParams, x1: Array,
                       callback: Optional[Callback] = None) -> RunTrace:
    """Same loop with g_k drawn from the oracle; reproducible for a fixed oracle seed."""
    rng = oracle.make_rng()
    return _projection_free_loop(oracle.base, lambda y: oracle.noisy_subgrad(y, rng),
                                 feasible_set, params, x1, callback)


def _projected_loop(objective: Objective, subgrad: SubgradFn, feasible_set: FeasibleSet,
                    beta: float, T: int, x0: Array, callback: Optional[Callback]) -> RunTrace:
    if not feasible_set.has_projection:
        raise UnsupportedSetError(f"{feasible_set.name} has no projection oracle")
    if not beta > 0:
        raise ArgumentError(f"beta must be positive, got {beta}")
    if int(T) != T or T < 1:
        raise ArgumentError(f"T must be a positive integer, got {T}")
    params = PgdParams(beta=float(beta), horizon_T=int(T))
    x0 = _check_start(feasible_set, x0)
    logger.debug("projected run on %s: beta=%g T=%d", feasible_set.name, beta, T)

    x = x0.copy()
    sum_x = x0.copy()
    f_x = np.empty(T + 1)
    wallclock = np.empty(T + 1)
    start = time.perf_counter()
    f_x[0] = objective.value(x)
    wallclock[0] = 0.0

    for k in range(T):
        try:
            g = subgrad(x)
            x_next = feasible_set.project(x - beta * g)
        except OptimizationError as exc:
            raise SolverError(str(exc), k) from exc
        _guard(k, "x", x_next)
        if callback is not None:
            callback(IterateState(k, _frozen(x), None, None, _frozen(sum_x), _frozen(g)))
        x = x_next
        sum_x += x
        f_x[k + 1] = objective.value(x)
        wallclock[k + 1] = time.perf_counter() - start

    if callback is not None:
        callback(IterateState(T, _frozen(x), None, None, _frozen(sum_x), None))
    xbar = sum_x / (T + 1)
    per_iter = pd.DataFrame({"k": np.arange(0, T + 1), "f_y": f_x, "q_norm": np.nan, "wallclock": wallclock})
    return RunTrace(xbar=_frozen(xbar), f_xbar=objective.value(xbar), per_iter=per_iter, params=params)


def pgd_run(objective: Objective, feasible_set: FeasibleSet, beta: float, T: int, x0: Array,
            callback: Optional[Callback] = None) -> RunTrace:
    """Projected subgradient descent; xbar averages x_0..x_T with weight 1/(T+1)."""
    return _projected_loop(objective, objective.subgrad, feasible_set, beta, T, x0, callback)


def sgd_run(oracle: StochasticOracle, feasible_set: FeasibleSet, beta: float, T: int, x0: Array,
            callback: Optional[Callback] = None) -> RunTrace:
    """Projected stochastic subgradient descent with noisy g_k at x_k."""
    rng = oracle.make_rng()
    return _projected_loop(oracle.base, lambda x: oracle.noisy_subgrad(x, rng),
                           feasible_set, beta, T, x0, callback)
