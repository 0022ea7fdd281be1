"""Poisson brackets of linear constraints and first/second class splitting.

All constraints handled here are linear in the canonical coordinates
(x, p, u, v), so every pairwise Poisson bracket is a constant and the whole
classification reduces to the kernel of one antisymmetric matrix.  Brackets
are never evaluated pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constraints import ConstraintMatrix
from .linalg import DEFAULT_TOL, numerical_ker, rank_tol


@dataclass(frozen=True)
class ClassifiedConstraints:
    """Result of splitting a constraint set by the kernel of its brackets.

    ``first_class`` rows commute (to tolerance) with every constraint;
    ``second_class`` rows carry an invertible bracket pairing and always
    come in pairs.
    """

    first_class: np.ndarray
    second_class: np.ndarray

    @property
    def n_first(self) -> int:
        return self.first_class.shape[0]

    @property
    def n_second(self) -> int:
        return self.second_class.shape[0]


def poisson_brackets(phi: ConstraintMatrix, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Antisymmetric matrix of pairwise canonical brackets of the rows.

    With the (x, p, u, v) block layout the bracket of rows i and j is
    sigma_i.beta_j - beta_i.sigma_j + rho_i.omega_j - omega_i.rho_j.  The
    result is antisymmetrized as (P - P') / 2 to remove rounding; an empty
    constraint set gives the empty matrix.
    """
    if phi.n_rows == 0:
        return np.zeros((0, 0))
    n = phi.n
    sx = phi.rows[:, :n]
    sp = phi.rows[:, n : 2 * n]
    su = phi.u_block
    sv = phi.v_block
    poi = sx @ sp.T - sp @ sx.T + su @ sv.T - sv @ su.T
    return (poi - poi.T) / 2.0


def split_first_second(
    phi: ConstraintMatrix, tol: float = DEFAULT_TOL
) -> ClassifiedConstraints:
    """Split independent constraint rows into first and second class.

    The kernel basis v of the bracket matrix gives the first-class
    combinations v' phi; the orthonormal completion w (from the same SVD)
    gives the second-class combinations w' phi.
    """
    poi = poisson_brackets(phi, tol)
    ker, compl = numerical_ker(poi, tol)
    first = ker.T @ phi.rows
    second = compl.T @ phi.rows
    return ClassifiedConstraints(first_class=first, second_class=second)


def second_class_bracket(phi: ConstraintMatrix, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Bracket matrix of the second-class combinations alone (invertible 2s x 2s)."""
    poi = poisson_brackets(phi, tol)
    _, compl = numerical_ker(poi, tol)
    return compl.T @ poi @ compl


def poisson_rank(phi: ConstraintMatrix, tol: float = DEFAULT_TOL) -> int:
    """Rank of the bracket matrix: the number of second-class constraints."""
    return rank_tol(poisson_brackets(phi, tol), tol)
