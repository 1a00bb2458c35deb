"""Binary linear programs over common blocks, plus LP-format export and import.

Three program shapes are built here:

* ``orig``: minimise the number of blocks subject to exact coverage of both strings;
* ``ph1``: maximise ``sum (C*len - 1) x`` subject to at-most-once coverage over
  blocks of a minimum length;
* ``ph2``: ``orig`` restricted to a block subset with some blocks fixed to 1.

Coverage rows are stored sparsely: row ``j`` of a string lists the variables
whose block interval contains position ``j``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, TextIO

from .blocks import BlockSet
from .core import CommonBlock, Instance, MCSPError, Partition

MINIMIZE = "minimize"
MAXIMIZE = "maximize"


class ModelError(MCSPError, ValueError):
    pass


class LPFormatError(ModelError):
    pass


class SolutionError(MCSPError, ValueError):
    pass


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[str, int], ...]
    op: str  # "=" or "<="
    rhs: int

    def lhs(self, values: dict[str, int]) -> int:
        return sum(c * values.get(v, 0) for v, c in self.terms)

    def satisfied(self, values: dict[str, int]) -> bool:
        lhs = self.lhs(values)
        return lhs == self.rhs if self.op == "=" else lhs <= self.rhs


@dataclass(frozen=True)
class IlpModel:
    sense: str
    objective: tuple[tuple[str, int], ...]
    constraints: tuple[Constraint, ...]
    binaries: tuple[str, ...]
    fixed: frozenset[str] = frozenset()
    kind: str = field(default="", compare=False)
    blocks: BlockSet | None = field(default=None, compare=False, repr=False)
    instance: Instance | None = field(default=None, compare=False, repr=False)

    @property
    def num_vars(self) -> int:
        return len(self.binaries)

    def block_of(self, var: str) -> CommonBlock:
        if self.blocks is None:
            raise ModelError("model carries no block set")
        return self.blocks[self._var_pos[var]]

    @cached_property
    def _var_pos(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.binaries)}

    def objective_value(self, values: dict[str, int]) -> int:
        return sum(c * values.get(v, 0) for v, c in self.objective)

    def violated(self, values: dict[str, int]) -> list[str]:
        bad = [c.name for c in self.constraints if not c.satisfied(values)]
        bad += [f"fix_{v}" for v in sorted(self.fixed, key=_var_sort_key) if values.get(v, 0) != 1]
        return bad


def var_name(block_id: int) -> str:
    return f"x{block_id}"


def _var_sort_key(v: str):
    return (len(v), v)


def _check_blocks(inst: Instance, blocks: BlockSet) -> None:
    for b in blocks:
        if not b.is_block_of(inst):
            raise ModelError(f"{tuple(b)} is not a common block of the instance")


def _coverage_rows(inst: Instance, blocks: BlockSet) -> tuple[list[list[str]], list[list[str]]]:
    n = inst.n
    rows1: list[list[str]] = [[] for _ in range(n)]
    rows2: list[list[str]] = [[] for _ in range(n)]
    for b, i in zip(blocks, blocks.ids):
        v = var_name(i)
        ln = len(b.text)
        for j in range(b.k1 - 1, b.k1 - 1 + ln):
            rows1[j].append(v)
        for j in range(b.k2 - 1, b.k2 - 1 + ln):
            rows2[j].append(v)
    return rows1, rows2


def _build(inst: Instance, blocks: BlockSet, op: str, sense: str, objective, kind: str,
           fixed: frozenset[str] = frozenset()) -> IlpModel:
    names = tuple(var_name(i) for i in blocks.ids)
    rows1, rows2 = _coverage_rows(inst, blocks)
    cons = [Constraint("len", tuple((v, len(b.text)) for v, b in zip(names, blocks)), op, inst.n)]
    for tag, rows in (("s1", rows1), ("s2", rows2)):
        for j, row in enumerate(rows, start=1):
            if not row:
                if op == "=":
                    raise ModelError(f"no block covers position {j} of {tag}; model is infeasible")
                continue  # an empty <= row is vacuous
            cons.append(Constraint(f"{tag}_{j}", tuple((v, 1) for v in row), op, 1))
    return IlpModel(sense, tuple(objective(names)), tuple(cons), names, fixed, kind, blocks, inst)


def build_ilp_orig(inst: Instance, blocks: BlockSet) -> IlpModel:
    """Exact model: min sum x subject to length = n and every position covered once."""
    _check_blocks(inst, blocks)
    return _build(inst, blocks, "=", MINIMIZE, lambda names: ((v, 1) for v in names), "orig")


def default_weight_constant(inst: Instance) -> int:
    return inst.n + 1


def build_ilp_ph1(inst: Instance, blocks_geq_l: BlockSet, C: int | None = None) -> IlpModel:
    """Max-coverage model over long blocks with objective ``sum (C*len - 1) x``."""
    if len(blocks_geq_l) == 0:
        raise ModelError("empty block set: minimum length exceeds the longest block")
    C = default_weight_constant(inst) if C is None else C
    if C < inst.n + 1:
        raise ModelError(f"weight constant C={C} must be at least n+1={inst.n + 1}")
    _check_blocks(inst, blocks_geq_l)
    weights = [C * len(b.text) - 1 for b in blocks_geq_l]
    return _build(inst, blocks_geq_l, "<=", MAXIMIZE, lambda names: zip(names, weights), "ph1")


def build_ilp_ph2(inst: Instance, blocks_ph2: BlockSet, forced: Iterable[CommonBlock]) -> IlpModel:
    """Exact model restricted to ``blocks_ph2`` with every forced block fixed to 1."""
    forced = list(forced)
    missing = [tuple(b) for b in forced if b not in blocks_ph2]
    if missing:
        raise ModelError(f"forced blocks not in the phase-2 block set: {missing}")
    try:
        Partition.from_blocks(inst, forced)
    except MCSPError as exc:
        raise ModelError(f"forced blocks are not a valid partial solution: {exc}") from exc
    _check_blocks(inst, blocks_ph2)
    fixed = frozenset(var_name(blocks_ph2.id_of[b]) for b in forced)
    return _build(inst, blocks_ph2, "=", MINIMIZE, lambda names: ((v, 1) for v in names), "ph2", fixed)


# -- LP format -----------------------------------------------------------------

_TERMS_PER_LINE = 10


def _format_expr(terms: Iterable[tuple[str, int]]) -> list[str]:
    parts = []
    for k, (v, c) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = v if mag == 1 else f"{mag} {v}"
        if k == 0:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f"{sign} {body}")
    lines = []
    for i in range(0, len(parts), _TERMS_PER_LINE):
        lines.append(" ".join(parts[i:i + _TERMS_PER_LINE]))
    return lines or ["0"]


def _write_statement(out: list[str], label: str, terms, tail: str = "") -> None:
    lines = _format_expr(terms)
    lines[-1] += tail
    out.append(f" {label}: {lines[0]}")
    out.extend(f"   {line}" for line in lines[1:])


def format_lp(model: IlpModel) -> str:
    out = [f"\\ mcsp model: {model.kind or 'unnamed'}"]
    out.append("Minimize" if model.sense == MINIMIZE else "Maximize")
    _write_statement(out, "obj", model.objective)
    out.append("Subject To")
    for c in model.constraints:
        _write_statement(out, c.name, c.terms, f" {c.op} {c.rhs}")
    for v in sorted(model.fixed, key=_var_sort_key):
        out.append(f" fix_{v}: {v} = 1")
    out.append("Binary")
    for i in range(0, len(model.binaries), _TERMS_PER_LINE):
        out.append(" " + " ".join(model.binaries[i:i + _TERMS_PER_LINE]))
    out.append("End")
    return "\n".join(out) + "\n"


def export_lp(model: IlpModel, destination: str | Path | TextIO | None = None) -> str:
    """Render ``model`` in CPLEX LP format; write it to ``destination`` if given."""
    text = format_lp(model)
    if destination is None:
        return text
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text)
    return text


_TOKEN = re.compile(r"\s*(<=|>=|=<|=>|=|[+-]|\d+(?:\.\d*)?|[A-Za-z_][\w.\[\]]*\s*:|[A-Za-z_][\w.\[\]]*)")
_SECTIONS = {
    "minimize": "min", "minimise": "min", "min": "min",
    "maximize": "max", "maximise": "max", "max": "max",
    "subject to": "st", "such that": "st", "st": "st", "s.t.": "st",
    "binary": "bin", "binaries": "bin", "bin": "bin",
    "end": "end",
}


def _tokens(text: str) -> list[str]:
    toks, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise LPFormatError(f"cannot parse LP text near {text[pos:pos + 20]!r}")
        toks.append(m.group(1).replace(" ", "").replace("\t", ""))
        pos = m.end()
    return toks


def _parse_expr(toks: list[str], i: int, stop: set[str]) -> tuple[list[tuple[str, int]], int]:
    terms, sign, coef = [], 1, None
    while i < len(toks) and toks[i] not in stop:
        t = toks[i]
        if t in "+-":
            sign = -1 if t == "-" else 1
        elif t[0].isdigit():
            coef = float(t)
        else:
            c = sign * (1 if coef is None else coef)
            if c != int(c):
                raise LPFormatError(f"non-integer coefficient {c} for {t}")
            terms.append((t, int(c)))
            sign, coef = 1, None
        i += 1
    return terms, i


def parse_lp(text: str) -> IlpModel:
    """Parse LP text produced by :func:`format_lp` (or a compatible subset)."""
    section, chunks = None, {"min": [], "max": [], "st": [], "bin": []}
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        key = _SECTIONS.get(line.lower())
        if key is not None:
            section = key
            if key == "end":
                break
            continue
        if section is None or section == "end":
            raise LPFormatError(f"content outside a section: {line!r}")
        chunks[section].append(line)

    if chunks["min"] and chunks["max"]:
        raise LPFormatError("both Minimize and Maximize sections present")
    sense = MAXIMIZE if chunks["max"] else MINIMIZE
    otoks = _tokens(" ".join(chunks["max"] or chunks["min"]))
    if otoks and otoks[0].endswith(":"):
        otoks = otoks[1:]
    objective, _ = _parse_expr(otoks, 0, set())
    objective = [t for t in objective if t[0] != "0"]

    toks = _tokens(" ".join(chunks["st"]))
    cons, fixed, i, k = [], set(), 0, 0
    comparators = {"=", "<=", ">=", "=<", "=>"}
    while i < len(toks):
        if toks[i].endswith(":"):
            name = toks[i][:-1]
            i += 1
        else:
            k += 1
            name = f"c{k}"
        terms, i = _parse_expr(toks, i, comparators)
        if i + 1 >= len(toks):
            raise LPFormatError(f"constraint {name} lacks a comparator or right-hand side")
        op = {"=<": "<=", "=>": ">="}.get(toks[i], toks[i])
        if op == ">=":
            raise LPFormatError(f"constraint {name}: '>=' rows are not part of this model family")
        neg = toks[i + 1] == "-"
        if neg:
            i += 1
        rhs = float(toks[i + 1]) * (-1 if neg else 1)
        i += 2
        if name.startswith("fix_") and op == "=" and rhs == 1 and len(terms) == 1 and terms[0][1] == 1:
            fixed.add(terms[0][0])
            continue
        cons.append(Constraint(name, tuple(terms), op, int(rhs)))

    binaries = tuple(_tokens(" ".join(chunks["bin"])))
    return IlpModel(sense, tuple(objective), tuple(cons), binaries, frozenset(fixed))


def read_lp(source: str | Path) -> IlpModel:
    return parse_lp(Path(source).read_text())


def parse_assignment(model: IlpModel, text: str) -> dict[str, int]:
    """Parse ``<var> <0|1>`` lines. Unlisted variables default to 0."""
    known = set(model.binaries)
    values: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SolutionError(f"line {lineno}: expected '<var> <value>', got {raw!r}")
        var, val = parts
        if var not in known:
            raise SolutionError(f"line {lineno}: unknown variable {var!r}")
        try:
            x = float(val)
        except ValueError:
            raise SolutionError(f"line {lineno}: value {val!r} is not a number") from None
        if x not in (0.0, 1.0):
            raise SolutionError(f"line {lineno}: fractional or non-binary value {val} for {var}")
        values[var] = int(x)
    return values


def import_solution(model: IlpModel, text: str) -> Partition:
    """Turn an external solver assignment into a validated partition.

    Needs a model built by one of the ``build_ilp_*`` functions (it carries
    the instance and blocks). Raises SolutionError if the assignment breaks
    any model constraint.
    """
    inst = model.instance
    if inst is None or model.blocks is None:
        raise SolutionError("model has no instance/block set attached; rebuild it instead of parsing LP text")
    values = parse_assignment(model, text)
    bad = model.violated(values)
    if bad:
        raise SolutionError(f"assignment violates constraint(s): {', '.join(bad[:5])}"
                            + (" ..." if len(bad) > 5 else ""))
    chosen = [model.block_of(v) for v in model.binaries if values.get(v, 0) == 1]
    try:
        return Partition.from_blocks(inst, chosen)
    except MCSPError as exc:
        raise SolutionError(str(exc)) from exc


def format_assignment(model: IlpModel, chosen: Iterable[CommonBlock]) -> str:
    """Inverse of :func:`parse_assignment` for a block selection (only 1-valued lines)."""
    if model.blocks is None:
        raise ModelError("model carries no block set")
    ids = model.blocks.id_of
    return "".join(f"{var_name(ids[b])} 1\n" for b in chosen)
