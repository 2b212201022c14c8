"""Independent LP oracle: dense two-phase tableau simplex with Bland's rule.

Deliberately naive — dense pivoting on small instances — so it shares no
code or algorithmic shortcuts with the production solver.  Row duals come
from solving B^T y = c_B on the final basis.

Problem form matches the production compile step: minimize c.x subject to
a_ub.x <= b_ub, a_eq.x = b_eq, lb <= x <= ub.  All lower bounds must be
finite; finite upper bounds become explicit rows internally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL = 1e-9


@dataclass
class RefResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    objective: float | None
    x: np.ndarray | None
    duals_ub: np.ndarray | None  # d(obj)/d(b_ub), per <= row as passed
    duals_eq: np.ndarray | None


def _pivot(tab: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    tab[row] /= tab[row, col]
    for r in range(tab.shape[0]):
        if r != row and abs(tab[r, col]) > 0.0:
            tab[r] -= tab[r, col] * tab[row]
    basis[row] = col


def _simplex(tab: np.ndarray, basis: np.ndarray, cost: np.ndarray) -> str:
    """Minimize cost over the tableau (equality form, rhs in last column).

    Bland's smallest-index rule for both entering and leaving variables,
    which guarantees termination without anti-cycling perturbations.
    """
    m, w = tab.shape
    n = w - 1
    while True:
        cb = cost[basis]
        red = cost[:n] - cb @ tab[:, :n]
        red[basis] = 0.0
        enter = -1
        for j in range(n):
            if red[j] < -TOL:
                enter = j
                break
        if enter < 0:
            return "optimal"
        col = tab[:, enter]
        rhs = tab[:, -1]
        ratios = np.full(m, np.inf)
        for i in range(m):
            if col[i] > TOL:
                ratios[i] = rhs[i] / col[i]
        if not np.isfinite(ratios).any():
            return "unbounded"
        best = np.min(ratios)
        leave = -1
        for i in range(m):
            if ratios[i] <= best + TOL and (leave < 0 or basis[i] < basis[leave]):
                leave = i
        _pivot(tab, basis, leave, enter)


def solve_reference(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None, bounds=None) -> RefResult:
    c = np.asarray(c, dtype=float)
    n = c.shape[0]
    a_ub = np.zeros((0, n)) if a_ub is None else np.asarray(a_ub, dtype=float).reshape(-1, n)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).ravel()
    a_eq = np.zeros((0, n)) if a_eq is None else np.asarray(a_eq, dtype=float).reshape(-1, n)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).ravel()
    if bounds is None:
        lb = np.zeros(n)
        ub = np.full(n, np.inf)
    else:
        arr = np.asarray(bounds, dtype=float)
        lb, ub = arr[:, 0].copy(), arr[:, 1].copy()
    if not np.all(np.isfinite(lb)):
        raise ValueError("reference solver needs finite lower bounds")
    if np.any(lb > ub):
        return RefResult("infeasible", None, None, None, None)

    # Shift x = x' + lb so x' >= 0; finite upper bounds become explicit
    # rows e_j x' <= ub_j - lb_j appended after the caller's <= rows.
    shift_ub = b_ub - a_ub @ lb
    shift_eq = b_eq - a_eq @ lb
    bound_rows = [(j, ub[j] - lb[j]) for j in range(n) if np.isfinite(ub[j])]
    blocks = [a_ub] + [np.eye(n)[[j]] for j, _ in bound_rows]
    a_le = np.vstack(blocks)
    rhs_le = np.concatenate([shift_ub, np.array([v for _, v in bound_rows])])
    m_le, m_eq = a_le.shape[0], a_eq.shape[0]
    m = m_le + m_eq
    n_cols = n + m_le

    # Equality form with slacks on <= rows, each row scaled by sigma_i so
    # the right-hand side is nonnegative.
    full = np.zeros((m, n_cols))
    rhs = np.zeros(m)
    sign = np.ones(m)
    full[:m_le, :n] = a_le
    full[:m_le, n:] = np.eye(m_le)
    rhs[:m_le] = rhs_le
    full[m_le:, :n] = a_eq
    rhs[m_le:] = shift_eq
    for i in range(m):
        if rhs[i] < 0:
            full[i] *= -1.0
            rhs[i] *= -1.0
            sign[i] = -1.0

    # Phase 1: artificial variable per row, minimize their sum.
    tab = np.zeros((m, n_cols + m + 1))
    tab[:, :n_cols] = full
    tab[:, n_cols:-1] = np.eye(m)
    tab[:, -1] = rhs
    basis = np.arange(n_cols, n_cols + m)
    cost1 = np.zeros(n_cols + m)
    cost1[n_cols:] = 1.0
    status = _simplex(tab, basis, cost1)
    assert status == "optimal"  # phase 1 is bounded below by zero
    if float(cost1[basis] @ tab[:, -1]) > 1e-7:
        return RefResult("infeasible", None, None, None, None)
    for i in range(m):  # drive leftover artificials out where possible
        if basis[i] >= n_cols:
            for j in range(n_cols):
                if abs(tab[i, j]) > TOL:
                    _pivot(tab, basis, i, j)
                    break
    kept = [i for i in range(m) if basis[i] < n_cols]
    dropped = [i for i in range(m) if basis[i] >= n_cols]  # redundant rows

    # Phase 2 on structural + slack columns only.
    tab2 = np.delete(tab, np.s_[n_cols:n_cols + m], axis=1)
    if dropped:
        tab2 = tab2[kept]
        basis = basis[kept]
    cost2 = np.zeros(n_cols)
    cost2[:n] = c
    status = _simplex(tab2, basis, cost2)
    if status == "unbounded":
        return RefResult("unbounded", None, None, None, None)

    x_shift = np.zeros(n_cols)
    x_shift[basis] = tab2[:, -1]
    x = x_shift[:n] + lb
    objective = float(c @ x)

    # Duals: solve B^T y = c_B against the ORIGINAL equality-form rows that
    # survived redundancy elimination, then undo the sigma scaling.
    bmat = full[kept][:, basis]
    y_kept = np.linalg.solve(bmat.T, cost2[basis])
    y = np.zeros(m)
    for pos, i in enumerate(kept):
        y[i] = y_kept[pos]
    row_duals = sign * y  # d obj / d rhs of each pre-scaling row
    duals_ub = row_duals[: a_ub.shape[0]].copy()
    duals_eq = row_duals[m_le:].copy()
    return RefResult("optimal", objective, x, duals_ub, duals_eq)
