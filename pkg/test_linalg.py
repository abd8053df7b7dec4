#!/usr/bin/env python3
"""
Tests for the power-iteration triplet and the full SVD.
"""

import numpy as np
import pytest

from core import DimensionError, NumericError
from linalg import MAX_SVD_DIM, full_svd, nuclear_norm, top_singular_triplet


def test_triplet_of_diagonal():
    top = top_singular_triplet(np.diag([3.0, 1.0]))
    assert top.s == pytest.approx(3.0, rel=1e-12)
    assert np.allclose(top.u, [1.0, 0.0], atol=1e-8)
    assert np.allclose(top.v, [1.0, 0.0], atol=1e-8)
    assert not top.degenerate


def test_triplet_of_rank_one():
    rng = np.random.default_rng(1)
    u, v = rng.standard_normal(5), rng.standard_normal(3)
    u, v = u / np.linalg.norm(u), v / np.linalg.norm(v)
    top = top_singular_triplet(2.0 * np.outer(u, v))
    assert top.s == pytest.approx(2.0, rel=1e-12)
    assert abs(abs(top.u @ u) - 1.0) < 1e-10


def test_triplet_matches_full_svd_on_random_matrices():
    rng = np.random.default_rng(2)
    for _ in range(20):
        A = rng.standard_normal((8, 6))
        top = top_singular_triplet(A)
        s_max = full_svd(A).S[0]
        assert abs(top.s - s_max) <= 1e-8 * s_max
        assert np.linalg.norm(top.u) == pytest.approx(1.0, abs=1e-10)
        assert np.linalg.norm(top.v) == pytest.approx(1.0, abs=1e-10)
        assert np.linalg.norm(A @ top.v - top.s * top.u) <= 1e-8 * s_max


def test_triplet_sign_convention_and_determinism():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((4, 7))
    first = top_singular_triplet(A)
    second = top_singular_triplet(A)
    assert np.array_equal(first.u, second.u) and first.s == second.s
    lead = first.u[np.flatnonzero(first.u)[0]]
    assert lead > 0


def test_triplet_of_zero_matrix_is_degenerate():
    top = top_singular_triplet(np.zeros((3, 2)))
    assert top.s == 0.0 and top.degenerate
    assert np.linalg.norm(top.u) == 1.0 and np.linalg.norm(top.v) == 1.0


def test_triplet_of_near_tied_pair():
    A = np.diag([1.0, 1.0 - 1e-7, 0.5])
    top = top_singular_triplet(A)
    # any unit vector in the leading pair is exact up to the gap
    assert 1.0 - 1e-7 <= top.s <= 1.0 + 1e-12
    assert abs(top.u[2]) <= 1e-8 and abs(top.v[2]) <= 1e-8
    assert np.linalg.norm(top.u) == pytest.approx(1.0, abs=1e-10)
    assert np.linalg.norm(A.T @ top.u) == pytest.approx(top.s, rel=1e-12)


def test_triplet_reports_non_convergence():
    rng = np.random.default_rng(4)
    A = rng.standard_normal((6, 6))
    with pytest.raises(NumericError) as info:
        top_singular_triplet(A, tol=0.0, max_iter=3)
    assert info.value.iterations == 3


def test_triplet_rejects_non_matrix():
    with pytest.raises(DimensionError):
        top_singular_triplet(np.ones(4))
    with pytest.raises(NumericError):
        top_singular_triplet(np.array([[1.0, np.nan]]))


def test_full_svd_of_identity_and_diagonal():
    assert np.allclose(full_svd(np.eye(4)).S, 1.0)
    sigma = np.array([0.5, 4.0, 2.0])
    assert np.allclose(full_svd(np.diag(sigma)).S, np.sort(sigma)[::-1])


def test_full_svd_invariants():
    rng = np.random.default_rng(5)
    A = rng.standard_normal((10, 7))
    svd = full_svd(A)
    assert svd.U.shape == (10, 10) and svd.V.shape == (7, 7)
    assert np.allclose(svd.U.T @ svd.U, np.eye(10), atol=1e-8)
    assert np.allclose(svd.V.T @ svd.V, np.eye(7), atol=1e-8)
    assert np.all(np.diff(svd.S) <= 0) and np.all(svd.S >= 0)
    S = np.zeros((10, 7))
    S[:7, :7] = np.diag(svd.S)
    rebuilt = svd.U @ S @ svd.V.T
    assert np.linalg.norm(rebuilt - A) <= 1e-8 * np.linalg.norm(A)


def test_full_svd_dimension_guard():
    with pytest.raises(DimensionError):
        full_svd(np.zeros((MAX_SVD_DIM + 1, 2)))


def test_norm_ordering_on_random_matrices():
    rng = np.random.default_rng(6)
    for _ in range(1000):
        m, n = rng.integers(1, 6, size=2)
        A = rng.standard_normal((m, n))
        fro = np.linalg.norm(A)
        assert fro <= nuclear_norm(A) + 1e-12
        assert full_svd(A).S[0] <= fro + 1e-12
    A = rng.standard_normal((5, 4))
    assert top_singular_triplet(A).s <= np.linalg.norm(A) + 1e-12


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
