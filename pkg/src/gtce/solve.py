"""LP solving with dual extraction and self-checks.

Wraps the HiGHS simplex (via scipy) behind a result type that reports
duals in a fixed convention: the dual of a row is the derivative of the
optimal objective with respect to that row's right-hand side, for the
row exactly as it was written (>= rows included).  Optimal results carry
residuals of strong duality, stationarity, and complementary slackness
so callers can assert solution quality instead of trusting the solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from .lp import CompiledLP, LinearProgram

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
LIMIT = "limit"

_STATUS = {0: OPTIMAL, 1: LIMIT, 2: INFEASIBLE, 3: UNBOUNDED, 4: LIMIT}


@dataclass
class LpResult:
    status: str
    objective: float | None = None
    x: np.ndarray | None = None
    duals: np.ndarray | None = None  # d objective / d rhs, per original row
    reduced_costs: np.ndarray | None = None
    message: str = ""
    certificate: list[str] = field(default_factory=list)
    checks: dict[str, float] = field(default_factory=dict)


def _dual_checks(comp: CompiledLP, bounds: np.ndarray, res) -> dict[str, float]:
    x = res.x
    y_ub = res.ineqlin.marginals if comp.b_ub.size else np.zeros(0)
    y_eq = res.eqlin.marginals if comp.b_eq.size else np.zeros(0)
    rc = res.lower.marginals + res.upper.marginals
    lb, ub = bounds[:, 0], bounds[:, 1]

    slack = comp.b_ub - comp.a_ub @ x if comp.b_ub.size else np.zeros(0)
    primal = float(max(np.max(-slack, initial=0.0), 0.0))
    if comp.b_eq.size:
        primal = max(primal, float(np.max(np.abs(comp.a_eq @ x - comp.b_eq))))

    comp_slack = float(np.max(np.abs(y_ub * slack), initial=0.0))
    at_lb = np.where(np.isfinite(lb), x - lb, np.inf)
    at_ub = np.where(np.isfinite(ub), ub - x, np.inf)
    comp_slack = max(
        comp_slack,
        float(np.max(np.abs(res.lower.marginals * np.where(at_lb < np.inf, at_lb, 0.0)), initial=0.0)),
        float(np.max(np.abs(res.upper.marginals * np.where(at_ub < np.inf, at_ub, 0.0)), initial=0.0)),
    )

    grad = comp.c.copy()
    if comp.b_ub.size:
        grad -= comp.a_ub.T @ y_ub
    if comp.b_eq.size:
        grad -= comp.a_eq.T @ y_eq
    stationarity = float(np.max(np.abs(grad - rc), initial=0.0))

    # A bound dual can only be nonzero at a finite bound; guard the product so
    # inactive infinite bounds never produce 0 * inf.
    lo_act = res.lower.marginals != 0.0
    up_act = res.upper.marginals != 0.0
    dual_obj = float(y_ub @ comp.b_ub) + float(y_eq @ comp.b_eq)
    dual_obj += float(np.sum(res.lower.marginals[lo_act] * np.where(np.isfinite(lb[lo_act]), lb[lo_act], 0.0)))
    dual_obj += float(np.sum(res.upper.marginals[up_act] * np.where(np.isfinite(ub[up_act]), ub[up_act], 0.0)))
    gap = abs(float(comp.c @ x) - dual_obj) / (1.0 + abs(float(comp.c @ x)))

    return {
        "primal_residual": primal,
        "complementary_slackness": comp_slack,
        "stationarity": stationarity,
        "duality_gap": gap,
    }


def solve_lp(
    lp: LinearProgram | CompiledLP,
    bounds_override: np.ndarray | None = None,
    check: bool = True,
    diagnose: bool = False,
) -> LpResult:
    """Solve the LP relaxation; integer markers are ignored here.

    ``bounds_override`` replaces the variable bounds array (used by the
    branch and bound driver).  With ``diagnose`` set, infeasible models
    get an elastic re-solve that names violated rows, and unbounded
    models get the candidate driving variables.
    """
    comp = lp.compile() if isinstance(lp, LinearProgram) else lp
    bounds = comp.bounds if bounds_override is None else bounds_override
    if np.any(bounds[:, 0] > bounds[:, 1] + 1e-12):
        return LpResult(status=INFEASIBLE, message="empty variable bound box")

    res = linprog(
        comp.c,
        A_ub=comp.a_ub if comp.b_ub.size else None,
        b_ub=comp.b_ub if comp.b_ub.size else None,
        A_eq=comp.a_eq if comp.b_eq.size else None,
        b_eq=comp.b_eq if comp.b_eq.size else None,
        bounds=bounds,
        method="highs",
    )
    status = _STATUS.get(res.status, LIMIT)
    if status != OPTIMAL:
        out = LpResult(status=status, message=str(res.message))
        if diagnose and status == INFEASIBLE:
            out.certificate = _infeasibility_certificate(comp, bounds)
        if diagnose and status == UNBOUNDED:
            out.certificate = _unbounded_candidates(comp, bounds)
        return out

    duals = np.zeros(comp.n_rows)
    if comp.b_ub.size:
        duals[comp.ub_source] = res.ineqlin.marginals * comp.ub_sign
    if comp.b_eq.size:
        duals[comp.eq_source] = res.eqlin.marginals
    result = LpResult(
        status=OPTIMAL,
        objective=float(res.fun),
        x=res.x,
        duals=duals,
        reduced_costs=res.lower.marginals + res.upper.marginals,
        message=str(res.message),
    )
    if check:
        result.checks = _dual_checks(comp, bounds, res)
    return result


def _infeasibility_certificate(comp: CompiledLP, bounds: np.ndarray) -> list[str]:
    """Minimise total constraint violation; rows needing slack are the conflict."""
    n = comp.c.shape[0]
    n_ub, n_eq = comp.b_ub.shape[0], comp.b_eq.shape[0]
    n_slack = n_ub + 2 * n_eq
    c = np.concatenate([np.zeros(n), np.ones(n_slack)])
    a_ub = sp.hstack([comp.a_ub, sp.eye(n_ub, n_slack, k=0) * -1.0], format="csr") if n_ub else None
    if n_eq:
        pos = sp.eye(n_eq, n_slack, k=n_ub, format="csr")
        neg = sp.eye(n_eq, n_slack, k=n_ub + n_eq, format="csr")
        a_eq = sp.hstack([comp.a_eq, pos - neg], format="csr")
    else:
        a_eq = None
    full_bounds = np.vstack([bounds, np.column_stack([np.zeros(n_slack), np.full(n_slack, np.inf)])])
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=comp.b_ub if n_ub else None,
        A_eq=a_eq,
        b_eq=comp.b_eq if n_eq else None,
        bounds=full_bounds,
        method="highs",
    )
    if res.status != 0:
        return ["elastic diagnosis failed"]
    s = res.x[n:]
    names = []
    for i in range(n_ub):
        if s[i] > 1e-7:
            names.append(f"row[{comp.ub_source[i]}] short by {s[i]:.6g}")
    for i in range(n_eq):
        v = s[n_ub + i] - s[n_ub + n_eq + i]
        if abs(v) > 1e-7:
            names.append(f"row[{comp.eq_source[i]}] off by {v:.6g}")
    return names or ["no single violated row; bound box itself conflicts"]


def _unbounded_candidates(comp: CompiledLP, bounds: np.ndarray) -> list[str]:
    out = []
    for j in np.flatnonzero(comp.c < 0):
        if not np.isfinite(bounds[j, 1]):
            out.append(f"var[{j}] has negative cost and no upper bound")
    for j in np.flatnonzero(comp.c > 0):
        if not np.isfinite(bounds[j, 0]):
            out.append(f"var[{j}] has positive cost and no lower bound")
    return out or ["descent direction lies in a free cone of costless variables"]
