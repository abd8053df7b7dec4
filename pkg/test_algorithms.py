#!/usr/bin/env python3
"""
Tests for the projection-free loop and the projected baselines.
"""

import math

import numpy as np
import pytest

from algorithms import TRACE_COLUMNS, pfw_run, pfw_run_stochastic, pgd_run, sgd_run
from core import (
    ArgumentError,
    DimensionError,
    FunctionObjective,
    NumericError,
    SolverError,
    UnsupportedSetError,
    params_deterministic,
    params_stochastic,
    pfw_bound,
    pgd_bound,
    pgd_step_size,
)
from linalg import nuclear_norm
from objectives import GaussianNoiseOracle, GaussianNoiseSpec, L1DistanceObjective
from sets import HypercubeSet, NuclearBallSet, VertexPolytopeSet


def hypercube_problem(n, scale=2.0):
    cube = HypercubeSet(n)
    objective = L1DistanceObjective(scale * np.ones(n))
    return cube, objective


class Recorder:
    def __init__(self):
        self.states = []

    def __call__(self, state):
        self.states.append(state)


# ---------------------------------------------------------------------------
# Projection-free method
# ---------------------------------------------------------------------------

def test_single_iteration_returns_start():
    cube, f = hypercube_problem(4)
    x1 = np.array([0.5, -0.5, 0.0, 1.0])
    trace = pfw_run(f, cube, params_deterministic(f.lipschitz, cube.radius, 1), x1)
    assert np.array_equal(trace.xbar, x1)
    assert trace.f_xbar == f.value(x1)
    assert trace.T == 1 and len(trace.per_iter) == 1


def test_trace_layout():
    cube, f = hypercube_problem(3)
    trace = pfw_run(f, cube, params_deterministic(f.lipschitz, cube.radius, 50), cube.center)
    assert list(trace.per_iter.columns) == TRACE_COLUMNS
    assert trace.per_iter["k"].tolist() == list(range(1, 51))
    assert np.all(trace.per_iter["wallclock"].diff().dropna() >= 0)
    assert not trace.xbar.flags.writeable


def test_drift_identity_and_closed_form_update():
    cube, f = hypercube_problem(6)
    params = params_deterministic(f.lipschitz, cube.radius, 1000)
    alpha, eta = params.alpha, params.eta
    record = Recorder()
    pfw_run(f, cube, params, cube.center, callback=record)
    states = record.states
    assert [s.k for s in states] == list(range(1, 1001))

    drift = np.zeros(6)
    for state in states:
        drift += state.y - state.x
        assert np.max(np.abs(state.Q - drift)) <= 1e-9
    for prev, cur in zip(states, states[1:]):
        residual = (alpha + eta) * cur.y - alpha * prev.y - eta * cur.x + eta * prev.Q + prev.g
        assert np.linalg.norm(residual) <= 1e-9
    assert states[-1].g is None


def test_iterates_stay_feasible_on_hypercube():
    cube, f = hypercube_problem(5, scale=3.0)
    record = Recorder()
    trace = pfw_run(f, cube, params_deterministic(f.lipschitz, cube.radius, 500), cube.center, callback=record)
    assert all(cube.contains(s.x) for s in record.states)
    assert cube.contains(trace.xbar)


def test_iterates_stay_feasible_on_nuclear_ball():
    rng = np.random.default_rng(0)
    ball = NuclearBallSet(4, 5, 2.0)
    f = L1DistanceObjective(3.0 * rng.standard_normal((4, 5)))
    record = Recorder()
    trace = pfw_run(f, ball, params_deterministic(f.lipschitz, ball.radius, 200), ball.center, callback=record)
    assert all(nuclear_norm(s.x) <= ball.tau + 1e-9 for s in record.states)
    assert nuclear_norm(trace.xbar) <= ball.tau + 1e-9


def test_converges_when_target_is_inside():
    cube = HypercubeSet(2)
    f = L1DistanceObjective(np.array([0.3, -0.2]))
    G, R = f.lipschitz, cube.radius
    for T in (100, 1000, 10000):
        trace = pfw_run(f, cube, params_deterministic(G, R, T), cube.center)
        assert trace.f_xbar <= pfw_bound(G, R, T)


def test_noise_free_stochastic_run_matches_deterministic():
    cube, f = hypercube_problem(10)
    T = 300
    params = params_deterministic(f.lipschitz, cube.radius, T)
    oracle = GaussianNoiseOracle(f, GaussianNoiseSpec(0.0, 11), dim=10)
    exact = pfw_run(f, cube, params, cube.center)
    noisy = pfw_run_stochastic(oracle, cube, params, cube.center)
    assert np.array_equal(exact.xbar, noisy.xbar)
    assert exact.per_iter["f_y"].equals(noisy.per_iter["f_y"])
    assert exact.per_iter["q_norm"].equals(noisy.per_iter["q_norm"])


def test_stochastic_runs_reproduce_per_seed():
    cube, f = hypercube_problem(8)
    B = math.sqrt(f.lipschitz ** 2 + 8 * 0.25)
    params = params_stochastic(f.lipschitz, B, cube.radius, 200)

    def run(seed):
        oracle = GaussianNoiseOracle(f, GaussianNoiseSpec(0.5, seed), dim=8)
        return pfw_run_stochastic(oracle, cube, params, cube.center)

    first, again, other = run(1), run(1), run(2)
    assert np.array_equal(first.xbar, again.xbar)
    assert first.f_xbar == again.f_xbar
    assert not np.array_equal(first.xbar, other.xbar)


def test_nan_subgradient_aborts_with_iteration():
    cube = HypercubeSet(3)
    bad = FunctionObjective(lambda x: 0.0, lambda x: np.full(3, np.nan), lipschitz=1.0)
    with pytest.raises(SolverError) as info:
        pfw_run(bad, cube, params_deterministic(1.0, cube.radius, 10), cube.center)
    assert info.value.k == 1


def test_infeasible_start_is_rejected():
    cube, f = hypercube_problem(3)
    with pytest.raises(ArgumentError):
        pfw_run(f, cube, params_deterministic(f.lipschitz, cube.radius, 10), np.full(3, 2.0))


def test_non_finite_start_is_rejected():
    cube, f = hypercube_problem(3)
    bad = np.array([0.0, np.nan, 0.0])
    with pytest.raises(NumericError):
        pfw_run(f, cube, params_deterministic(f.lipschitz, cube.radius, 10), bad)
    with pytest.raises(NumericError):
        pgd_run(f, cube, 0.1, 10, bad)
    with pytest.raises(DimensionError):
        pfw_run(f, cube, params_deterministic(f.lipschitz, cube.radius, 10), np.zeros(4))


def test_runs_on_polytope_without_projection():
    simplex = VertexPolytopeSet.capped_simplex(3, 1.0)
    f = L1DistanceObjective(np.array([1.0, 1.0, 1.0]))
    trace = pfw_run(f, simplex, params_deterministic(f.lipschitz, simplex.radius, 100), simplex.center)
    assert np.all(trace.xbar >= -1e-12) and np.sum(trace.xbar) <= 1.0 + 1e-12


# ---------------------------------------------------------------------------
# Projected baselines
# ---------------------------------------------------------------------------

def test_pgd_zero_subgradient_is_fixed_point():
    cube = HypercubeSet(3)
    flat = FunctionObjective(lambda x: 0.0, lambda x: np.zeros(3), lipschitz=1.0)
    x0 = np.array([0.2, -0.4, 0.9])
    trace = pgd_run(flat, cube, 0.1, 25, x0)
    assert np.allclose(trace.xbar, x0, atol=1e-15)


def test_pgd_interior_step():
    cube = HypercubeSet(3)
    f = L1DistanceObjective(np.full(3, 0.5))
    record = Recorder()
    pgd_run(f, cube, 0.01, 1, cube.center, callback=record)
    g0 = record.states[0].g
    assert np.array_equal(g0, -np.ones(3))
    assert np.allclose(record.states[1].x, cube.center - 0.01 * g0)


def test_pgd_trace_and_averaging():
    cube, f = hypercube_problem(4)
    record = Recorder()
    T = 40
    trace = pgd_run(f, cube, pgd_step_size(f.lipschitz, cube.radius, T), T, cube.center, callback=record)
    assert [s.k for s in record.states] == list(range(0, T + 1))
    assert trace.per_iter["k"].tolist() == list(range(0, T + 1))
    assert trace.per_iter["q_norm"].isna().all()
    xs = np.array([s.x for s in record.states])
    assert np.allclose(trace.xbar, xs.mean(axis=0))


def test_pgd_within_bound():
    cube, f = hypercube_problem(10)
    G, R = f.lipschitz, cube.radius
    for T in (100, 1000):
        trace = pgd_run(f, cube, pgd_step_size(G, R, T), T, cube.center)
        assert trace.f_xbar - 10.0 <= pgd_bound(G, R, T)


def test_pgd_requires_projection():
    simplex = VertexPolytopeSet.capped_simplex(2, 1.0)
    f = L1DistanceObjective(np.ones(2))
    with pytest.raises(UnsupportedSetError):
        pgd_run(f, simplex, 0.1, 10, simplex.center)


def test_pgd_rejects_bad_arguments():
    cube, f = hypercube_problem(2)
    with pytest.raises(ArgumentError):
        pgd_run(f, cube, 0.0, 10, cube.center)
    with pytest.raises(ArgumentError):
        pgd_run(f, cube, 0.1, 0, cube.center)


def test_sgd_reproduces_per_seed():
    cube, f = hypercube_problem(5)
    oracle = GaussianNoiseOracle(f, GaussianNoiseSpec(1.0, 3), dim=5)
    a = sgd_run(oracle, cube, 0.05, 100, cube.center)
    b = sgd_run(oracle, cube, 0.05, 100, cube.center)
    assert np.array_equal(a.xbar, b.xbar)
    assert cube.contains(a.xbar)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
