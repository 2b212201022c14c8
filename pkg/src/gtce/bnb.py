"""Best-first branch and bound over the LP relaxation.

Node selection is by lowest relaxation bound with insertion order as the
tie-break; branching picks the most fractional integer variable (lowest
index on ties).  Children are solved eagerly so the heap always orders
on true child bounds, which keeps the global bound monotone and the
whole search deterministic for a fixed model.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .lp import CompiledLP, LinearProgram
from .solve import INFEASIBLE, OPTIMAL, UNBOUNDED, solve_lp

INT_TOL = 1e-6


@dataclass
class MipResult:
    status: str  # "optimal" | "infeasible" | "node_limit"
    objective: float | None = None
    x: np.ndarray | None = None
    bound: float = -math.inf
    gap: float = math.inf
    nodes: int = 0
    log: list[str] = field(default_factory=list)


def _fractional(x: np.ndarray, integers: np.ndarray) -> tuple[int, float] | None:
    if integers.size == 0:
        return None
    vals = x[integers]
    frac = np.abs(vals - np.round(vals))
    j = int(np.argmax(frac))  # argmax takes the first maximum: lowest index wins ties
    if frac[j] <= INT_TOL:
        return None
    return int(integers[j]), float(frac[j])


def _rel_gap(incumbent: float, bound: float) -> float:
    if not math.isfinite(incumbent):
        return math.inf
    return (incumbent - bound) / max(abs(incumbent), 1e-9)


def branch_and_bound(
    lp: LinearProgram | CompiledLP,
    rel_gap: float = 1e-4,
    node_limit: int = 100000,
) -> MipResult:
    """Minimise the LP with its integer-marked variables forced integral."""
    comp = lp.compile() if isinstance(lp, LinearProgram) else lp
    log: list[str] = []

    root = solve_lp(comp, check=False)
    if root.status == INFEASIBLE:
        return MipResult(status="infeasible", log=["root relaxation infeasible"])
    if root.status == UNBOUNDED:
        raise ValueError("relaxation is unbounded; integer search is meaningless")
    if root.status != OPTIMAL:
        raise RuntimeError(f"root relaxation failed: {root.message}")

    incumbent_x = None
    incumbent = math.inf
    counter = 0
    nodes = 0
    # heap entries: (bound, insertion counter, bound patch dict, relaxation x)
    heap: list[tuple[float, int, dict[int, tuple[float, float]], np.ndarray]] = []

    def note(bound: float) -> None:
        log.append(
            f"nodes={nodes} bound={bound:.6f} incumbent="
            + (f"{incumbent:.6f}" if math.isfinite(incumbent) else "none")
            + f" gap={_rel_gap(incumbent, bound):.3e}"
        )

    branch = _fractional(root.x, comp.integers)
    if branch is None:
        note(root.objective)
        return MipResult(
            status="optimal", objective=root.objective, x=root.x,
            bound=root.objective, gap=0.0, nodes=0, log=log,
        )
    heapq.heappush(heap, (root.objective, counter, {}, root.x))
    best_bound = root.objective
    note(best_bound)

    def patched_bounds(patch: dict[int, tuple[float, float]]) -> np.ndarray:
        b = comp.bounds.copy()
        for j, (lo, hi) in patch.items():
            b[j, 0], b[j, 1] = lo, hi
        return b

    status = "optimal"
    while heap:
        bound, _, patch, x = heapq.heappop(heap)
        best_bound = bound
        if _rel_gap(incumbent, bound) <= rel_gap:
            break
        if nodes >= node_limit:
            status = "node_limit"
            break
        branch = _fractional(x, comp.integers)
        if branch is None:
            # integral nodes never reach the heap; defensive only
            if bound < incumbent:
                incumbent, incumbent_x = bound, x
            continue
        j, _ = branch
        lo, hi = patch.get(j, (comp.bounds[j, 0], comp.bounds[j, 1]))
        floor_v = math.floor(x[j])
        for side in ((lo, float(floor_v)), (float(floor_v + 1), hi)):
            child_patch = dict(patch)
            child_patch[j] = side
            nodes += 1
            res = solve_lp(comp, bounds_override=patched_bounds(child_patch), check=False)
            if res.status != OPTIMAL:
                continue
            if res.objective >= incumbent - rel_gap * max(abs(incumbent), 1e-9):
                continue
            child_branch = _fractional(res.x, comp.integers)
            if child_branch is None:
                if res.objective < incumbent:
                    incumbent, incumbent_x = res.objective, res.x
                    note(best_bound)
            else:
                counter += 1
                heapq.heappush(heap, (res.objective, counter, child_patch, res.x))
        if nodes % 200 == 0:
            note(best_bound)

    if not heap and status == "optimal":
        best_bound = incumbent if math.isfinite(incumbent) else best_bound
    if incumbent_x is None:
        # search exhausted without an integral point: infeasible in integers
        if status == "optimal":
            return MipResult(status="infeasible", nodes=nodes, log=log + ["no integral point"])
        return MipResult(status="node_limit", nodes=nodes, bound=best_bound, log=log)
    gap = _rel_gap(incumbent, best_bound)
    note(best_bound)
    return MipResult(
        status=status,
        objective=incumbent,
        x=incumbent_x,
        bound=best_bound,
        gap=max(gap, 0.0),
        nodes=nodes,
        log=log,
    )
