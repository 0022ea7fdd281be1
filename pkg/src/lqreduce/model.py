"""Problem data, Pontryagin's Hamiltonian, and the initial reduction matrices.

An LQ optimal control problem is the data (A, B, Q, N, R): dynamics
xdot = A x + B u and quadratic running cost
L(x, u) = x'Qx/2 + x'Nu + u'Ru/2, with Q and R symmetric.  When R is
invertible the stationarity condition dH/du = 0 has the closed-form
feedback solution; when R is singular the problem requires the constraint
reduction implemented in :mod:`lqreduce.reduction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AsymmetricQ,
    AsymmetricR,
    DimensionMismatch,
    NonFiniteEntry,
)
from .linalg import symplectic_matrix

_SYM_RTOL = 1e-12


def _as_float_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise DimensionMismatch(f"matrix expected, got array of ndim={m.ndim}")
    return m


@dataclass(frozen=True)
class LQProblem:
    """The five constant matrices of an LQ problem.

    Attributes:
        A: n x n state matrix.
        B: n x m control matrix.
        Q: n x n symmetric state-cost matrix.
        N: n x m cross-cost matrix.
        R: m x m symmetric control-cost matrix.
        name: optional label carried through reports.
    """

    A: np.ndarray
    B: np.ndarray
    Q: np.ndarray
    N: np.ndarray
    R: np.ndarray
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        for attr in ("A", "B", "Q", "N", "R"):
            object.__setattr__(self, attr, _as_float_matrix(getattr(self, attr)))

    @property
    def n(self) -> int:
        """State dimension."""
        return self.A.shape[0]

    @property
    def m(self) -> int:
        """Control dimension."""
        return self.B.shape[1]

    def is_regular(self, tol: float) -> bool:
        """True when R has full numerical rank (direct feedback exists)."""
        from .linalg import rank_tol

        return rank_tol(self.R, tol) == self.m


@dataclass(frozen=True)
class ExtendedPoint:
    """A point (x, p, u, v) of the symplectically extended space.

    ``v`` holds the coordinates conjugate to the controls; it defaults to
    zero, which is where the original problem lives inside the extension.
    """

    x: np.ndarray
    p: np.ndarray
    u: np.ndarray
    v: np.ndarray | None = None

    def __post_init__(self):
        for attr in ("x", "p", "u"):
            object.__setattr__(
                self, attr, np.asarray(getattr(self, attr), dtype=float).reshape(-1)
            )
        v = self.v
        if v is None:
            v = np.zeros_like(self.u)
        object.__setattr__(self, "v", np.asarray(v, dtype=float).reshape(-1))


@dataclass(frozen=True)
class InitialMatrices:
    """Seed matrices of the reduction.

    g0 is the 2n x 2n drift block of the Hamilton equations, z0 the 2n x m
    control block, and (s1, r1) the coefficients of the primary constraints
    dH/du = s1 (x; p) - r1 u.  They satisfy s1 = -z0' J.
    """

    g0: np.ndarray
    z0: np.ndarray
    s1: np.ndarray
    r1: np.ndarray


def _asymmetry(m: np.ndarray) -> float:
    return float(np.linalg.norm(m - m.T) / (1.0 + np.linalg.norm(m)))


def validate(problem: LQProblem) -> None:
    """Raise a ValidationError subclass if the problem data is inconsistent.

    Checks, in order: finiteness of all entries, mutual shape consistency of
    the five blocks, and symmetry of Q and R (relative tolerance 1e-12).
    Symmetry is enforced rather than silently repaired so that user input
    errors surface.
    """
    for label in ("A", "B", "Q", "N", "R"):
        block = getattr(problem, label)
        if not np.all(np.isfinite(block)):
            raise NonFiniteEntry(f"matrix {label} contains NaN or Inf")
    n, m = problem.n, problem.m
    if n < 1 or m < 1:
        raise DimensionMismatch(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    expected = {"A": (n, n), "B": (n, m), "Q": (n, n), "N": (n, m), "R": (m, m)}
    for label, shape in expected.items():
        actual = getattr(problem, label).shape
        if actual != shape:
            raise DimensionMismatch(f"matrix {label} has shape {actual}, expected {shape}")
    if _asymmetry(problem.Q) > _SYM_RTOL:
        raise AsymmetricQ("state-cost matrix Q is not symmetric")
    if _asymmetry(problem.R) > _SYM_RTOL:
        raise AsymmetricR("control-cost matrix R is not symmetric")


def pontryagin_hamiltonian(problem: LQProblem, pt: ExtendedPoint) -> float:
    """Evaluate H(x, p, u) = p'(Ax + Bu) - x'Qx/2 - x'Nu - u'Ru/2.

    The coisotropic coordinates of ``pt`` do not enter: the extension term
    vanishes on v = 0 and the arbitrary extension functions are never
    materialized.
    """
    n, m = problem.n, problem.m
    if pt.x.shape != (n,) or pt.p.shape != (n,) or pt.u.shape != (m,):
        raise DimensionMismatch(
            f"point shapes {pt.x.shape}/{pt.p.shape}/{pt.u.shape} do not match n={n}, m={m}"
        )
    x, p, u = pt.x, pt.p, pt.u
    drift = problem.A @ x + problem.B @ u
    cost = 0.5 * x @ problem.Q @ x + x @ problem.N @ u + 0.5 * u @ problem.R @ u
    return float(p @ drift - cost)


def initial_matrices(problem: LQProblem) -> InitialMatrices:
    """Build G0, Z0 and the primary-constraint coefficients S1, R1.

    G0 = [[A, 0], [Q, -A']], Z0 = [B; N], S1 = [-N' | B'] and R1 = R.  The
    identity S1 = -Z0' J holds exactly by construction.
    """
    validate(problem)
    n = problem.n
    g0 = np.block([[problem.A, np.zeros((n, n))], [problem.Q, -problem.A.T]])
    z0 = np.vstack([problem.B, problem.N])
    s1 = np.hstack([-problem.N.T, problem.B.T])
    r1 = problem.R.copy()
    return InitialMatrices(g0=g0, z0=z0, s1=s1, r1=r1)


def hamilton_gradient(problem: LQProblem, pt: ExtendedPoint) -> np.ndarray:
    """Analytic (dH/dx; dH/dp) used to cross-check G0, Z0 in tests."""
    x, p, u = pt.x, pt.p, pt.u
    dx = problem.A.T @ p - problem.Q @ x - problem.N @ u
    dp = problem.A @ x + problem.B @ u
    return np.concatenate([dx, dp])


__all__ = [
    "LQProblem",
    "ExtendedPoint",
    "InitialMatrices",
    "validate",
    "pontryagin_hamiltonian",
    "initial_matrices",
    "hamilton_gradient",
    "symplectic_matrix",
]
