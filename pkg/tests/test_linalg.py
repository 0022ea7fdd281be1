import numpy as np
import pytest
from numpy.testing import assert_allclose

from lqreduce import (
    DimensionMismatch,
    EmptySubspace,
    equilibrate_rows,
    independent_rows,
    numerical_ker,
    rank_tol,
    subspace_angle,
    symplectic_matrix,
)

TOL = 1e-6


class TestRankTol:
    def test_identity(self):
        assert rank_tol(np.eye(2), TOL) == 2

    def test_duplicate_rows(self):
        assert rank_tol([[1, 0], [1, 0]], TOL) == 1

    def test_below_threshold_value(self):
        # singular values of a diagonal matrix are its absolute entries
        assert rank_tol([[1e-8, 0], [0, 1]], TOL) == 1

    def test_empty(self):
        assert rank_tol(np.zeros((0, 3)), TOL) == 0
        assert rank_tol(np.zeros((3, 0)), TOL) == 0

    def test_orthogonal_invariance(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 8))
            m = int(rng.integers(2, 8))
            a = rng.standard_normal((n, m))
            qn, _ = np.linalg.qr(rng.standard_normal((n, n)))
            qm, _ = np.linalg.qr(rng.standard_normal((m, m)))
            assert rank_tol(qn @ a, TOL) == rank_tol(a, TOL)
            assert rank_tol(a @ qm, TOL) == rank_tol(a, TOL)


def gram_schmidt_rows(m, drop_tol=1e-10):
    """Independent row-space oracle used to cross-check independent_rows."""
    basis = []
    for row in np.asarray(m, dtype=float):
        v = row.copy()
        for b in basis:
            v -= (v @ b) * b
        norm = np.linalg.norm(v)
        if norm > drop_tol:
            basis.append(v / norm)
    return np.array(basis) if basis else np.zeros((0, m.shape[1]))


class TestIndependentRows:
    def test_duplicate_rows_collapse(self):
        out = independent_rows([[1.0, 0.0], [1.0, 0.0]], TOL)
        assert out.shape[0] == 1
        assert subspace_angle(out, [[1.0, 0.0]], TOL) < 1e-10

    def test_identity_preserved(self):
        out = independent_rows(np.eye(3), TOL)
        assert out.shape == (3, 3)
        assert rank_tol(out, TOL) == 3

    def test_row_space_matches_gram_schmidt(self):
        m = np.array([[1.0, 1.0], [2.0, 2.0], [0.0, 1.0]])
        out = independent_rows(m, TOL)
        assert out.shape[0] == 2
        assert subspace_angle(out, gram_schmidt_rows(m), TOL) < 1e-10

    def test_rows_mutually_orthogonal(self, rng):
        m = rng.standard_normal((5, 7))
        out = independent_rows(m, TOL)
        gram = out @ out.T
        assert_allclose(gram - np.diag(np.diag(gram)), 0.0, atol=1e-10)

    def test_idempotent(self, rng):
        for _ in range(10):
            m = rng.standard_normal((4, 6)) @ rng.standard_normal((6, 6))
            once = independent_rows(m, TOL)
            twice = independent_rows(once, TOL)
            assert once.shape[0] == twice.shape[0]
            assert subspace_angle(once, twice, TOL) < 1e-12

    def test_zero_collapses_to_empty(self):
        out = independent_rows(np.zeros((3, 4)), TOL)
        assert out.shape == (0, 4)


class TestNumericalKer:
    def test_zero_matrix(self):
        v, w = numerical_ker(np.zeros((2, 2)), TOL)
        assert v.shape == (2, 2) and w.shape == (2, 0)
        assert_allclose(v.T @ v, np.eye(2), atol=1e-12)

    def test_invertible_antisymmetric(self):
        v, w = numerical_ker([[0.0, 1.0], [-1.0, 0.0]], TOL)
        assert v.shape == (2, 0) and w.shape == (2, 2)

    def test_block_antisymmetric_kernel(self):
        a = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        v, w = numerical_ker(a, TOL)
        assert v.shape == (3, 1) and w.shape == (3, 2)
        assert_allclose(a @ v, 0.0, atol=1e-12)
        assert subspace_angle(v.T, [[0.0, 0.0, 1.0]], TOL) < 1e-10

    def test_kernel_residual_and_orthonormality(self, rng):
        for _ in range(20):
            a = rng.standard_normal((int(rng.integers(1, 6)), int(rng.integers(1, 6))))
            v, w = numerical_ker(a, TOL)
            basis = np.hstack([v, w])
            assert_allclose(basis.T @ basis, np.eye(a.shape[1]), atol=1e-12)
            if v.shape[1]:
                residual = np.linalg.norm(a @ v, axis=0)
                assert np.all(residual <= TOL * (1 + np.linalg.norm(a, 2)))


class TestSubspaceAngle:
    def test_identical_spans(self):
        assert subspace_angle([[1.0, 0.0]], [[2.0, 0.0]], TOL) == 0.0

    def test_orthogonal_lines(self):
        assert_allclose(subspace_angle([[1.0, 0.0]], [[0.0, 1.0]], TOL), np.pi / 2)

    def test_tiny_angle_resolved(self):
        # exact angle is arctan(1e-8); must be resolved well below the
        # saturation floor of a cosine-only formula
        got = subspace_angle([[1.0, 0.0]], [[1.0, 1e-8]], TOL)
        assert_allclose(got, np.arctan(1e-8), rtol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            subspace_angle([[1.0, 0.0]], [[1.0, 0.0, 0.0]], TOL)

    def test_empty_subspace(self):
        with pytest.raises(EmptySubspace):
            subspace_angle(np.zeros((1, 2)), [[1.0, 0.0]], TOL)

    def test_self_angle_zero(self, rng):
        for _ in range(20):
            m = rng.standard_normal((3, 6))
            assert subspace_angle(m, m, TOL) < 1e-12

    def test_symmetric_when_ranks_equal(self, rng):
        for _ in range(10):
            m1 = rng.standard_normal((3, 6))
            m2 = rng.standard_normal((3, 6))
            a = subspace_angle(m1, m2, TOL)
            b = subspace_angle(m2, m1, TOL)
            assert_allclose(a, b, atol=1e-12)
            assert 0.0 <= a <= np.pi / 2


class TestEquilibrateRows:
    def test_unit_norms(self, rng):
        m = rng.standard_normal((4, 5)) * 100.0
        out = equilibrate_rows(m, TOL)
        assert_allclose(np.linalg.norm(out, axis=1), 1.0)

    def test_subtolerance_rows_dropped(self):
        m = np.array([[1.0, 0.0], [1e-9, 0.0]])
        out = equilibrate_rows(m, TOL)
        assert out.shape == (1, 2)

    def test_row_space_preserved(self, rng):
        m = rng.standard_normal((3, 5)) * np.array([[1e3], [1.0], [1e-3]])
        out = equilibrate_rows(m, TOL)
        assert subspace_angle(m, out, TOL) < 1e-12


def test_symplectic_matrix_properties():
    j = symplectic_matrix(3)
    assert_allclose(j @ j, -np.eye(6))
    assert_allclose(j.T, -j)
