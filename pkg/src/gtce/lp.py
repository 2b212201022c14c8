"""Sparse linear program container with named rows, tags, and objective terms.

The expansion model builder emits rows tagged with the formulation block
they belong to, and objective coefficients grouped into named cost terms
so the cost breakdown can be audited after solving.  The container is
solver-agnostic; compilation produces the arrays a solver consumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

INF = float("inf")

LE, GE, EQ = "<=", ">=", "="


@dataclass
class Var:
    name: str
    lb: float = 0.0
    ub: float = INF
    integer: bool = False


@dataclass
class Row:
    name: str
    coeffs: list[tuple[int, float]]
    sense: str
    rhs: float
    tag: str = ""


@dataclass
class CompiledLP:
    """Solver-ready arrays; inequality rows are all flipped to <= form."""

    c: np.ndarray
    a_ub: sp.csr_matrix
    b_ub: np.ndarray
    ub_source: np.ndarray  # original row index per <= row
    ub_sign: np.ndarray  # +1 if the row was <=, -1 if it was >=
    a_eq: sp.csr_matrix
    b_eq: np.ndarray
    eq_source: np.ndarray
    bounds: np.ndarray  # (n, 2)
    integers: np.ndarray  # indices of integer vars
    n_rows: int


class LinearProgram:
    def __init__(self, name: str = "lp"):
        self.name = name
        self.vars: list[Var] = []
        self.rows: list[Row] = []
        self.obj_terms: dict[str, dict[int, float]] = {}
        self._var_idx: dict[str, int] = {}
        self._row_idx: dict[str, int] = {}
        self._compiled: CompiledLP | None = None

    # -- construction -------------------------------------------------

    def add_var(self, name: str, lb: float = 0.0, ub: float = INF, integer: bool = False) -> int:
        if name in self._var_idx:
            raise ValueError(f"duplicate variable {name}")
        if lb > ub:
            raise ValueError(f"variable {name}: lb {lb} > ub {ub}")
        self.vars.append(Var(name, float(lb), float(ub), integer))
        self._var_idx[name] = len(self.vars) - 1
        self._compiled = None
        return len(self.vars) - 1

    def add_row(
        self,
        name: str,
        coeffs: list[tuple[int, float]],
        sense: str,
        rhs: float,
        tag: str = "",
    ) -> int:
        if name in self._row_idx:
            raise ValueError(f"duplicate row {name}")
        if sense not in (LE, GE, EQ):
            raise ValueError(f"row {name}: bad sense {sense!r}")
        merged: dict[int, float] = {}
        for j, v in coeffs:
            if v != 0.0:
                merged[j] = merged.get(j, 0.0) + v
        self.rows.append(Row(name, sorted(merged.items()), sense, float(rhs), tag))
        self._row_idx[name] = len(self.rows) - 1
        self._compiled = None
        return len(self.rows) - 1

    def add_objective(self, term: str, var: int, coeff: float) -> None:
        bucket = self.obj_terms.setdefault(term, {})
        bucket[var] = bucket.get(var, 0.0) + coeff
        self._compiled = None

    # -- lookup -------------------------------------------------------

    def var_index(self, name: str) -> int:
        return self._var_idx[name]

    def row_index(self, name: str) -> int:
        return self._row_idx[name]

    def objective_vector(self) -> np.ndarray:
        c = np.zeros(len(self.vars))
        for bucket in self.obj_terms.values():
            for j, v in bucket.items():
                c[j] += v
        return c

    def census(self) -> dict[str, int]:
        """Row counts per tag plus variable counts per kind."""
        out: dict[str, int] = {}
        for r in self.rows:
            key = r.tag or "untagged"
            out[key] = out.get(key, 0) + 1
        out["vars:continuous"] = sum(1 for v in self.vars if not v.integer)
        out["vars:integer"] = sum(1 for v in self.vars if v.integer)
        out["rows"] = len(self.rows)
        return out

    # -- compilation --------------------------------------------------

    def compile(self) -> CompiledLP:
        if self._compiled is not None:
            return self._compiled
        n = len(self.vars)
        c = self.objective_vector()
        ub_r, ub_c, ub_v, b_ub, ub_src, ub_sign = [], [], [], [], [], []
        eq_r, eq_c, eq_v, b_eq, eq_src = [], [], [], [], []
        for i, row in enumerate(self.rows):
            if row.sense == EQ:
                k = len(b_eq)
                for j, v in row.coeffs:
                    eq_r.append(k)
                    eq_c.append(j)
                    eq_v.append(v)
                b_eq.append(row.rhs)
                eq_src.append(i)
            else:
                sgn = 1.0 if row.sense == LE else -1.0
                k = len(b_ub)
                for j, v in row.coeffs:
                    ub_r.append(k)
                    ub_c.append(j)
                    ub_v.append(sgn * v)
                b_ub.append(sgn * row.rhs)
                ub_src.append(i)
                ub_sign.append(sgn)
        a_ub = sp.csr_matrix((ub_v, (ub_r, ub_c)), shape=(len(b_ub), n))
        a_eq = sp.csr_matrix((eq_v, (eq_r, eq_c)), shape=(len(b_eq), n))
        bounds = np.array([[v.lb, v.ub] for v in self.vars], dtype=float).reshape(n, 2)
        self._compiled = CompiledLP(
            c=c,
            a_ub=a_ub,
            b_ub=np.asarray(b_ub, dtype=float),
            ub_source=np.asarray(ub_src, dtype=int),
            ub_sign=np.asarray(ub_sign, dtype=float),
            a_eq=a_eq,
            b_eq=np.asarray(b_eq, dtype=float),
            eq_source=np.asarray(eq_src, dtype=int),
            bounds=bounds,
            integers=np.array([j for j, v in enumerate(self.vars) if v.integer], dtype=int),
            n_rows=len(self.rows),
        )
        return self._compiled
