"""Plain-text LP model exchange (CPLEX LP dialect) plus solution import.

The writer emits a canonical form: every variable gets a bounds line in
declaration order, floats are shortest round-trip reprs, and each row is
preceded by a ``\\ tag:`` comment carrying its formulation tag.  The
parser registers variables from the Bounds section before reading any
expression, so writing a parsed model reproduces the file byte for byte.
"""

from __future__ import annotations

import math
import re
from pathlib import Path

from .lp import EQ, GE, INF, LE, LinearProgram

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.]*$")
_RESERVED = {
    "minimize", "minimise", "maximize", "maximise", "subject", "to", "st",
    "bounds", "bound", "general", "generals", "binary", "binaries", "bin",
    "end", "free", "inf", "infinity", "obj",
}
_WRAP = 200
_TOKEN = re.compile(r"[+-]|[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?|[A-Za-z_][A-Za-z0-9_.]*")


def _check_name(name: str) -> str:
    if not _NAME_RE.match(name) or re.match(r"^[eE]\d", name) or name.lower() in _RESERVED:
        raise ValueError(f"name {name!r} not safe for LP files")
    return name


def _num(v: float) -> str:
    if v == math.inf:
        return "+inf"
    if v == -math.inf:
        return "-inf"
    return repr(float(v))


def _terms(coeffs: list[tuple[int, float]], names: list[str]) -> str:
    parts: list[str] = []
    for j, v in coeffs:
        piece = f"{_num(abs(v))} {names[j]}"
        if not parts:
            parts.append(piece if v >= 0 else f"- {piece}")
        else:
            parts.append(f"{'-' if v < 0 else '+'} {piece}")
    return " ".join(parts) if parts else "0"


def _wrap_line(line: str) -> list[str]:
    if len(line) <= _WRAP:
        return [line]
    out: list[str] = []
    current = ""
    for tok in line.split(" "):
        if current and len(current) + 1 + len(tok) > _WRAP:
            out.append(current)
            current = " " + tok
        else:
            current = tok if not current else current + " " + tok
    if current:
        out.append(current)
    return out


def write_lp(lp: LinearProgram, path: str | Path | None = None) -> str:
    """Render the model as LP text; optionally also write it to ``path``."""
    names = [_check_name(v.name) for v in lp.vars]
    for r in lp.rows:
        _check_name(r.name)
    lines: list[str] = [f"\\ model: {lp.name}", "Minimize"]
    obj: dict[int, float] = {}
    for bucket in lp.obj_terms.values():
        for j, v in bucket.items():
            obj[j] = obj.get(j, 0.0) + v
    obj_coeffs = sorted((j, v) for j, v in obj.items() if v != 0.0)
    lines += _wrap_line(" obj: " + _terms(obj_coeffs, names))
    lines.append("Subject To")
    for r in lp.rows:
        if r.tag:
            lines.append(f"\\ tag: {r.tag}")
        sense = {LE: "<=", GE: ">=", EQ: "="}[r.sense]
        lines += _wrap_line(f" {r.name}: {_terms(r.coeffs, names)} {sense} {_num(r.rhs)}")
    lines.append("Bounds")
    for v in lp.vars:
        lines.append(f" {_num(v.lb)} <= {v.name} <= {_num(v.ub)}")
    generals = [v.name for v in lp.vars if v.integer and not (v.lb == 0 and v.ub == 1)]
    binaries = [v.name for v in lp.vars if v.integer and v.lb == 0 and v.ub == 1]
    if generals:
        lines.append("Generals")
        lines += [f" {n}" for n in generals]
    if binaries:
        lines.append("Binaries")
        lines += [f" {n}" for n in binaries]
    lines.append("End")
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


_SECTIONS = {
    "minimize": "objective", "minimise": "objective",
    "subject to": "rows", "st": "rows", "s.t.": "rows", "s.t": "rows",
    "bounds": "bounds",
    "general": "generals", "generals": "generals",
    "binary": "binaries", "binaries": "binaries", "bin": "binaries",
    "end": "end",
}


def _section_of(line: str) -> str | None:
    word = re.sub(r"\s+", " ", line.strip().lower())
    if word in ("maximize", "maximise"):
        raise ValueError("only minimisation models are supported")
    return _SECTIONS.get(word)


def _parse_value(tok: str) -> float:
    t = tok.lower().lstrip("+")
    if t in ("inf", "infinity"):
        return INF
    if t in ("-inf", "-infinity"):
        return -INF
    return float(tok)


def _parse_terms(text: str) -> list[tuple[str, float]]:
    leftovers = _TOKEN.sub(" ", text).strip()
    if leftovers:
        raise ValueError(f"unparseable tokens in expression: {leftovers!r}")
    out: list[tuple[str, float]] = []
    sign = 1.0
    pending: float | None = None
    for m in _TOKEN.finditer(text):
        tok = m.group(0)
        if tok == "+":
            continue
        if tok == "-":
            sign = -sign
            continue
        if tok[0].isdigit() or tok[0] == ".":
            pending = (pending if pending is not None else 1.0) * float(tok)
            continue
        out.append((tok, sign * (pending if pending is not None else 1.0)))
        sign, pending = 1.0, None
    if pending is not None and pending != 0.0:
        raise ValueError(f"dangling numeric term in expression: {text!r}")
    return out


def _read_text(source: str | Path) -> str:
    if isinstance(source, Path):
        return source.read_text()
    if "\n" not in source and Path(source).exists():
        return Path(source).read_text()
    return source


def parse_lp(source: str | Path) -> LinearProgram:
    """Parse LP text (or a file path) in the dialect of :func:`write_lp`."""
    text = _read_text(source)
    raw_lines = text.splitlines()

    lp = LinearProgram()
    if raw_lines:
        name_m = re.match(r"\\ model: (.*)", raw_lines[0])
        if name_m:
            lp.name = name_m.group(1)

    # pass 1: variable registry from Bounds / Generals / Binaries
    section: str | None = None
    bounds_order: list[str] = []
    bounds_map: dict[str, tuple[float, float]] = {}
    integral: set[str] = set()
    for line in raw_lines:
        stripped = line.strip()
        if not stripped or stripped.startswith("\\"):
            continue
        sec = _section_of(stripped)
        if sec:
            section = sec
            continue
        if section == "bounds":
            toks = stripped.split()
            if len(toks) == 2 and toks[1].lower() == "free":
                name, lo, hi = toks[0], -INF, INF
            elif len(toks) == 5 and toks[1] == "<=" and toks[3] == "<=":
                name, lo, hi = toks[2], _parse_value(toks[0]), _parse_value(toks[4])
            elif len(toks) == 3 and toks[1] == "=":
                name = toks[0]
                lo = hi = _parse_value(toks[2])
            elif len(toks) == 3 and toks[1] in ("<=", ">="):
                name = toks[0]
                lo, hi = (0.0, _parse_value(toks[2])) if toks[1] == "<=" else (_parse_value(toks[2]), INF)
            else:
                raise ValueError(f"cannot parse bounds line: {stripped!r}")
            if name not in bounds_map:
                bounds_order.append(name)
            bounds_map[name] = (lo, hi)
        elif section in ("generals", "binaries"):
            name = stripped
            integral.add(name)
            if name not in bounds_map:
                bounds_order.append(name)
                bounds_map[name] = (0.0, INF) if section == "generals" else (0.0, 1.0)

    for n in bounds_order:
        lo, hi = bounds_map[n]
        lp.add_var(n, lb=lo, ub=hi, integer=n in integral)

    def vid(name: str) -> int:
        if name not in lp._var_idx:
            lp.add_var(name)
        return lp.var_index(name)

    def flush_row(expr: str, row_tag: str) -> None:
        m = re.match(
            r"\s*(?:([A-Za-z_][A-Za-z0-9_.]*)\s*:)?\s*(.*?)\s*(<=|>=|=|<|>)\s*(\S+)\s*$",
            expr,
        )
        if not m:
            raise ValueError(f"cannot parse constraint: {expr!r}")
        rname, body, sense, rhs = m.groups()
        norm = {"<": LE, ">": GE, "<=": LE, ">=": GE, "=": EQ}[sense]
        coeffs = [(vid(n), v) for n, v in _parse_terms(body)]
        lp.add_row(rname or f"r{len(lp.rows)}", coeffs, norm, _parse_value(rhs), tag=row_tag)

    # pass 2: objective and rows
    section = None
    tag = ""
    buffer = ""
    obj_text = ""
    for line in raw_lines:
        stripped = line.strip()
        if stripped.startswith("\\"):
            m = re.match(r"\\ tag: (.*)", stripped)
            if m and section == "rows":
                if buffer.strip():
                    flush_row(buffer, tag)
                    buffer = ""
                tag = m.group(1)
            continue
        if not stripped:
            continue
        sec = _section_of(stripped)
        if sec:
            if section == "rows" and buffer.strip():
                flush_row(buffer, tag)
                buffer = ""
            section = sec
            continue
        if section == "objective":
            obj_text += " " + stripped
        elif section == "rows":
            if re.match(r"^[A-Za-z_][A-Za-z0-9_.]*\s*:", stripped) and buffer.strip():
                flush_row(buffer, tag)
                buffer = stripped
                tag = ""
            else:
                buffer += " " + stripped
    if section == "rows" and buffer.strip():
        flush_row(buffer, tag)

    obj_text = re.sub(r"^\s*[A-Za-z_][A-Za-z0-9_.]*\s*:", "", obj_text).strip()
    for n, v in _parse_terms(obj_text):
        lp.add_objective("obj", vid(n), v)
    return lp


def read_solution_values(source: str | Path) -> dict[str, float]:
    """Read ``name value`` lines; ``#`` and ``\\`` comment lines are skipped."""
    text = _read_text(source)
    out: dict[str, float] = {}
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("#") or s.startswith("\\"):
            continue
        parts = s.split()
        if len(parts) != 2:
            raise ValueError(f"cannot parse solution line: {line!r}")
        out[parts[0]] = float(parts[1])
    return out
