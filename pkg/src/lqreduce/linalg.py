"""Tolerance-aware dense linear algebra used throughout the reduction.

All rank decisions in this package are made against an *absolute* threshold
on singular values (count of sigma > tol), mirroring MATLAB-style
``rank(A, tol)``.  Problems should therefore be scaled so that meaningful
entries are well above the tolerance.

Empty matrices (zero rows and/or columns) are first-class values: every
routine accepts and may return them.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, EmptySubspace

#: Default singular-value threshold used by the whole package.
DEFAULT_TOL = 1e-6


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a 2-d float array; 1-d input becomes a single row."""
    m = np.asarray(a, dtype=float)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got ndim={m.ndim}")
    return m


def empty_matrix(cols: int) -> np.ndarray:
    """The canonical 0 x cols matrix."""
    return np.zeros((0, cols))


def rank_tol(m, tol: float = DEFAULT_TOL) -> int:
    """Number of singular values of ``m`` strictly greater than ``tol``.

    An empty matrix has rank 0.
    """
    m = as_matrix(m)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.count_nonzero(s > tol))


def independent_rows(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Replace ``m`` by r mutually orthogonal rows spanning its row space.

    r is the numerical rank of ``m``; the rows returned are the first r rows
    of U^T m from the SVD of m.  Rank-zero input collapses to the empty
    matrix, so "numerically zero" and "empty" behave identically downstream.
    """
    m = as_matrix(m)
    if m.size == 0:
        return empty_matrix(m.shape[1])
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    r = int(np.count_nonzero(s > tol))
    if r == 0:
        return empty_matrix(m.shape[1])
    return u[:, :r].T @ m


def equilibrate_rows(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Scale every row to unit norm; rows of norm <= tol are dropped.

    A row of norm below the tolerance is the zero function at working
    tolerance, so removing it matches treating sub-tolerance singular
    values as zero.  Row scaling never changes row spaces or exact ranks,
    but it makes subsequent independence decisions at an absolute
    threshold scale-free: without it, constraint rows of very different
    magnitudes let perturbation noise cross the threshold.
    """
    m = as_matrix(m)
    if m.size == 0:
        return empty_matrix(m.shape[1])
    norms = np.linalg.norm(m, axis=1)
    keep = norms > tol
    if not np.any(keep):
        return empty_matrix(m.shape[1])
    return m[keep] / norms[keep, None]


def numerical_ker(a, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Split column-coordinate space into numerical kernel and its complement.

    Returns ``(v, w)`` where the columns of ``v`` are an orthonormal basis of
    the kernel of ``a`` at tolerance ``tol`` (right singular vectors for
    singular values <= tol) and the columns of ``w`` complete them to an
    orthonormal basis of R^cols.  ``v`` has cols - r columns and ``w`` has r,
    with r the numerical rank.
    """
    a = as_matrix(a)
    n = a.shape[1]
    if a.size == 0:
        return np.eye(n), np.zeros((n, 0))
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    r = int(np.count_nonzero(s > tol))
    v = vt[r:, :].T
    w = vt[:r, :].T
    return v, w


def row_space_basis(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the row space of ``m`` (rows of the result)."""
    m = as_matrix(m)
    if m.size == 0:
        return empty_matrix(m.shape[1])
    _, s, vt = np.linalg.svd(m, full_matrices=False)
    r = int(np.count_nonzero(s > tol))
    return vt[:r, :]


def subspace_angle(m1, m2, tol: float = DEFAULT_TOL) -> float:
    """Largest principal angle between the row spaces of ``m1`` and ``m2``.

    Returns an angle in [0, pi/2]; 0 exactly when the row spaces coincide
    (within ``tol``).  When the ranks differ, the angle is taken over the
    min(rank1, rank2) principal angle pairs, matching how perturbed and
    exact constraint sets of different sizes are compared.

    Computed with the combined sine/cosine recipe (scipy), which resolves
    angles far below 1e-8 where a pure arccos of cosines saturates.

    Raises:
        DimensionMismatch: column counts differ (the two matrices live in
            different coordinate spaces, so no angle exists).
        EmptySubspace: either argument has numerical rank 0.
    """
    m1 = as_matrix(m1)
    m2 = as_matrix(m2)
    if m1.shape[1] != m2.shape[1]:
        raise DimensionMismatch(
            f"cannot compare subspaces of R^{m1.shape[1]} and R^{m2.shape[1]}"
        )
    q1 = row_space_basis(m1, tol)
    q2 = row_space_basis(m2, tol)
    if q1.shape[0] == 0 or q2.shape[0] == 0:
        raise EmptySubspace("subspace angle against a rank-zero matrix")
    angles = scipy.linalg.subspace_angles(q1.T, q2.T)
    return float(angles[0])


def symplectic_matrix(n: int) -> np.ndarray:
    """The canonical 2n x 2n symplectic matrix, oriented as [[0, -I], [I, 0]].

    This orientation makes J (xdot; pdot) = (dH/dx; dH/dp) hold exactly for
    Hamilton's equations and gives the primary-constraint identity
    S1 = -Z0' J.
    """
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = -np.eye(n)
    j[n:, :n] = np.eye(n)
    return j
