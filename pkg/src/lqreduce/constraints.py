"""Linear constraint sets over the extended phase space (x, p, u, v).

A constraint row [sigma | beta | rho | omega] represents the linear function
sigma.x + beta.p + rho.u + omega.v on R^{2n + 2 m_cur}.  The control and
coisotropic blocks shrink together as partial feedback solves controls.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .linalg import (
    DEFAULT_TOL,
    as_matrix,
    empty_matrix,
    equilibrate_rows,
    independent_rows,
)


@dataclass(frozen=True)
class ConstraintMatrix:
    """Rows of linear constraints with explicit (x, p, u, v) block layout.

    Attributes:
        rows: q x (2n + 2*m_cur) coefficient matrix.
        n: state dimension (x and p blocks each have n columns).
        m_cur: current control dimension (u and v blocks each have m_cur
            columns); shrinks as feedback is applied.
    """

    rows: np.ndarray
    n: int
    m_cur: int

    def __post_init__(self):
        rows = as_matrix(self.rows)
        object.__setattr__(self, "rows", rows)
        if rows.shape[1] != 2 * self.n + 2 * self.m_cur:
            raise DimensionMismatch(
                f"constraint rows have {rows.shape[1]} columns, "
                f"expected {2 * self.n + 2 * self.m_cur}"
            )

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def xp(self) -> np.ndarray:
        return self.rows[:, : 2 * self.n]

    @property
    def u_block(self) -> np.ndarray:
        return self.rows[:, 2 * self.n : 2 * self.n + self.m_cur]

    @property
    def v_block(self) -> np.ndarray:
        return self.rows[:, 2 * self.n + self.m_cur :]

    def with_rows(self, rows: np.ndarray) -> "ConstraintMatrix":
        return ConstraintMatrix(rows, self.n, self.m_cur)


def empty_constraints(n: int, m_cur: int) -> ConstraintMatrix:
    return ConstraintMatrix(empty_matrix(2 * n + 2 * m_cur), n, m_cur)


def stack_constraints(
    phi: ConstraintMatrix, new_rows: np.ndarray, tol: float = DEFAULT_TOL
) -> ConstraintMatrix:
    """Append rows below ``phi`` and re-independentize the result."""
    stacked = np.vstack([phi.rows, as_matrix(new_rows)])
    return phi.with_rows(independent_rows(equilibrate_rows(stacked, tol), tol))


def apply_feedback_to_constraints(
    phi: ConstraintMatrix,
    v_rot: np.ndarray,
    feed: np.ndarray,
    r: int,
    tol: float = DEFAULT_TOL,
) -> ConstraintMatrix:
    """Fold a rank-r partial feedback into a constraint set.

    ``v_rot`` is the orthogonal control rotation whose first r rotated
    controls are solved as feed @ (x; p).  The u and v blocks are rotated by
    ``v_rot``; the solved control columns are substituted into the (x, p)
    block; the solved coisotropic columns are dropped outright (those
    coordinates vanish on the zero-order constraints).  Rows that become
    dependent (or zero) are removed.
    """
    v_rot = as_matrix(v_rot)
    feed = as_matrix(feed) if np.asarray(feed).size else np.zeros((r, 2 * phi.n))
    if v_rot.shape != (phi.m_cur, phi.m_cur):
        raise DimensionMismatch(
            f"rotation is {v_rot.shape}, expected ({phi.m_cur}, {phi.m_cur})"
        )
    if r > phi.m_cur:
        raise DimensionMismatch(f"cannot solve {r} of {phi.m_cur} controls")
    if feed.shape != (r, 2 * phi.n):
        raise DimensionMismatch(
            f"feedback block is {feed.shape}, expected ({r}, {2 * phi.n})"
        )
    u_rot = phi.u_block @ v_rot
    v_cois = phi.v_block @ v_rot
    xp = phi.xp + u_rot[:, :r] @ feed
    rows = np.hstack([xp, u_rot[:, r:], v_cois[:, r:]])
    rows = independent_rows(equilibrate_rows(rows, tol), tol)
    return ConstraintMatrix(rows, phi.n, phi.m_cur - r)


def strip_coisotropic(phi: ConstraintMatrix, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Project a constraint set onto the (x, p, u) coordinates.

    Drops the coisotropic columns and re-independentizes; rows that were
    pure v-coordinate directions vanish.  Returns a plain matrix with
    2n + m_cur columns.
    """
    kept = phi.rows[:, : 2 * phi.n + phi.m_cur]
    return independent_rows(equilibrate_rows(kept, tol), tol)
