"""Smoke tests for the python bindings."""

import numpy as np
import pytest

import tensorsandwich as tsx


def test_generate_shapes_and_determinism():
    T, A, B, C = tsx.generate_synthetic(12, 3, seed=7)
    assert T.shape == (12, 12, 12)
    assert A.shape == B.shape == C.shape == (12, 3)
    T2, *_ = tsx.generate_synthetic(12, 3, seed=7)
    np.testing.assert_array_equal(T, T2)


def test_khatri_rao_matches_numpy_kron():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(4, 3))
    B = rng.normal(size=(5, 3))
    K = tsx.khatri_rao(A, B)
    assert K.shape == (20, 3)
    for col in range(3):
        np.testing.assert_allclose(K[:, col], np.kron(A[:, col], B[:, col]), atol=1e-14)


def test_unfold3_identity():
    T, A, B, C = tsx.generate_synthetic(8, 2, seed=3)
    lhs = tsx.unfold3(T)
    rhs = C @ tsx.khatri_rao(A, B).T
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_cp_to_dense_round_trip():
    T, A, B, C = tsx.generate_synthetic(6, 2, seed=5)
    np.testing.assert_allclose(tsx.cp_to_dense(A, B, C), T, atol=1e-14)


def test_complete_recovers_exactly():
    T, *_ = tsx.generate_synthetic(30, 3, seed=11)
    A, B, C, report = tsx.complete(T, rank=3, seed=4)
    assert report["status"] == "ok"
    assert report["rel_error"] < 1e-8
    assert report["total"] <= T.size
    est = tsx.cp_to_dense(A, B, C)
    assert tsx.relative_error(est, T) == pytest.approx(report["rel_error"])


def test_complete_reports_failures_as_data():
    T, *_ = tsx.generate_synthetic(20, 3, seed=13)
    _, _, _, report = tsx.complete(T, rank=3, seed=1, budget=30)
    assert report["status"] == "budget_exceeded"
    assert report["rel_error"] == pytest.approx(1.0)


def test_add_noise_snr_ratio():
    T, *_ = tsx.generate_synthetic(10, 2, seed=17)
    noisy = tsx.add_noise_snr(T, 20.0, seed=2)
    ratio = np.linalg.norm(noisy - T) / np.linalg.norm(T)
    assert ratio == pytest.approx(1e-2, rel=1e-10)


def test_coherence_and_kruskal():
    basis = np.zeros((8, 2))
    basis[0, 0] = basis[1, 1] = 1.0
    assert tsx.coherence(basis) == pytest.approx(4.0)
    assert tsx.kruskal_rank_at_least_2(np.eye(3))
    assert not tsx.kruskal_rank_at_least_2(np.ones((3, 2)))


def test_masked_als_refines():
    T, A, B, C = tsx.generate_synthetic(12, 2, seed=19)
    mask = np.random.default_rng(3).random(T.shape) < 0.6
    A2, B2, C2, residuals, skipped = tsx.masked_als(T, mask, A, B, C, iters=3)
    assert len(residuals) == 3
    assert residuals[-1] < 1e-9  # exact init stays a fixed point
    np.testing.assert_allclose(tsx.cp_to_dense(A2, B2, C2), T, atol=1e-9)


def test_structural_errors_raise():
    with pytest.raises(ValueError):
        tsx.generate_synthetic(4, 9)
    with pytest.raises(ValueError):
        tsx.relative_error(np.zeros((2, 2, 2)), np.zeros((2, 2, 3)))
