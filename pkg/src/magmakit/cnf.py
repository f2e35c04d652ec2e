"""DIMACS CNF export of search specifications, and model decoding.

One boolean variable per (cell, value) with one-hot constraints for
every cell; absorber-row cells are pinned by unit clauses.  Every
auxiliary variable is defined two-sidedly (it is an AND or an OR of
earlier literals), so a complete cell assignment determines the whole
model by evaluation; satisfiability of the CNF with a table's cells
appended as units therefore coincides with evaluating the canonical
model, which the test suite exploits for exhaustive agreement sweeps.

A small DPLL solver is included so tiny encodings can be decided
without any external tooling; the toolkit never shells out to a solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .core import CayleyTable, MagmaError
from .search import (
    SearchSpec,
    SpecInvalid,
    _PAIR_PREDICATES,
    _TRIPLE_PREDICATES,
    _pair_candidates,
    _triple_candidates,
    _validate_spec,
)


class ModelInconsistent(MagmaError):
    """A decoded model violates the one-hot cell constraints."""


@dataclass
class CnfDocument:
    """A CNF in integer-literal form plus the variable map that ties
    cell/value pairs to variables and records auxiliary definitions."""

    n: int
    spec: SearchSpec
    num_vars: int
    clauses: List[Tuple[int, ...]]
    cell_var: Dict[Tuple[int, int, int], int]
    aux_defs: List[Tuple[str, int, Tuple[int, ...]]]  # ("and"|"or", var, lits)


class _Builder:
    def __init__(self, n: int, spec: SearchSpec):
        self.n = n
        self.spec = spec
        self.num_vars = 0
        self.clauses: List[Tuple[int, ...]] = []
        self.cell_var: Dict[Tuple[int, int, int], int] = {}
        self.aux_defs: List[Tuple[str, int, Tuple[int, ...]]] = []
        for i in range(n):
            for j in range(n):
                for v in range(n):
                    self.num_vars += 1
                    self.cell_var[(i, j, v)] = self.num_vars

    def cell(self, i: int, j: int, v: int) -> int:
        return self.cell_var[(i, j, v)]

    def clause(self, *lits: int) -> None:
        self.clauses.append(tuple(lits))

    def new_and(self, lits: Sequence[int]) -> int:
        """Fresh v with v <-> AND(lits); returns v as a literal."""
        lits = tuple(lits)
        if not lits:
            raise SpecInvalid("empty conjunction")  # pragma: no cover
        self.num_vars += 1
        v = self.num_vars
        for lit in lits:
            self.clause(-v, lit)
        self.clause(v, *(-lit for lit in lits))
        self.aux_defs.append(("and", v, lits))
        return v

    def new_or(self, lits: Sequence[int]) -> int:
        """Fresh v with v <-> OR(lits); returns v as a literal."""
        lits = tuple(lits)
        if not lits:
            raise SpecInvalid("empty disjunction")  # pragma: no cover
        self.num_vars += 1
        v = self.num_vars
        for lit in lits:
            self.clause(v, -lit)
        self.clause(-v, *lits)
        self.aux_defs.append(("or", v, lits))
        return v


def _build_structure(b: _Builder) -> None:
    n = b.n
    # One-hot per cell: at least one value, at most one value.
    for i in range(n):
        for j in range(n):
            vs = [b.cell(i, j, v) for v in range(n)]
            b.clause(*vs)
            for p in range(n):
                for q in range(p + 1, n):
                    b.clause(-vs[p], -vs[q])
    # Absorber rows pinned: row 0 constant 0, row 1 constant 1.
    for j in range(n):
        b.clause(b.cell(0, j, 0))
        b.clause(b.cell(1, j, 1))


def _row_diff(b: _Builder, a: int, c: int, j: int) -> int:
    # rows a and c differ in column j
    parts = [b.new_and((b.cell(a, j, v), -b.cell(c, j, v))) for v in range(b.n)]
    return b.new_or(parts)


def _top_e2pm(b: _Builder) -> int:
    n = b.n
    parts = []
    for a in range(n):
        for c in range(a + 1, n):
            parts.append(b.new_or([_row_diff(b, a, c, j) for j in range(n)]))
    for e in range(2, n):
        extra = b.new_and([b.cell(e, j, e) for j in range(n)])
        parts.append(-extra)
    return b.new_and(parts)


def _eq_apply(b: _Builder, s: int, x: int, r: int, target: int) -> int:
    # r . (s . x) = target
    n = b.n
    return b.new_or([b.new_and((b.cell(s, x, m), b.cell(r, m, target)))
                     for m in range(n)])


def _top_pair(b: _Builder, candidates, need_mutual: bool, core) -> int:
    parts = []
    for s, r in candidates:
        conj = [_eq_apply(b, s, x, r, x) for x in core]
        if need_mutual:
            conj.extend(_eq_apply(b, r, x, s, x) for x in core)
        conj.append(b.cell(r, 0, 0))  # anchoring r . z1 = z1
        parts.append(b.new_and(conj))
    return b.new_or(parts)


def _top_dichotomy(b: _Builder, core, tau: Optional[int]) -> int:
    n = b.n
    absorber_at = {}
    core_at = {}
    for y in core:
        for j in range(n):
            absorber_at[(y, j)] = b.new_or((b.cell(y, j, 0), b.cell(y, j, 1)))
        for j in core:
            core_at[(y, j)] = b.new_or([b.cell(y, j, v) for v in core])
    strict = {y: b.new_and([absorber_at[(y, j)] for j in range(n)]) for y in core}
    cls = {y: b.new_and([absorber_at[(y, j)] for j in core]) for y in core}
    ncl = {y: b.new_and([core_at[(y, j)] for j in core]) for y in core}
    parts = [b.new_or([ncl[y] for y in core])]
    parts.extend(b.new_or((cls[y], ncl[y])) for y in core)
    if tau is not None:
        parts.append(strict[tau])
    else:
        parts.append(b.new_or([strict[y] for y in core]))
    return b.new_and(parts)


def _top_triples(b: _Builder, candidates, need_nontrivial: bool, core) -> int:
    n = b.n
    inert = {}
    nonconst = {}
    parts = []
    for a, bb, c in candidates:
        if bb not in inert:
            inert[bb] = b.new_and([
                b.new_or([b.cell(bb, x, v) for v in core]) for x in core])
        conj = [inert[bb]]
        for x in core:
            conj.append(b.new_or([
                b.new_and((b.cell(bb, x, m), b.cell(c, m, w), b.cell(a, x, w)))
                for m in range(n) for w in range(n)]))
        if need_nontrivial:
            if a not in nonconst:
                consts = [b.new_and([b.cell(a, x, v) for x in core])
                          for v in range(n)]
                nonconst[a] = -b.new_or(consts)
            conj.append(nonconst[a])
        parts.append(b.new_and(conj))
    return b.new_or(parts)


def _top_associative(b: _Builder) -> int:
    n = b.n
    parts = []
    for a in range(n):
        for c in range(n):
            for d in range(n):
                eqs = []
                for w in range(n):
                    left = b.new_or([b.new_and((b.cell(a, c, m), b.cell(m, d, w)))
                                     for m in range(n)])
                    right = b.new_or([b.new_and((b.cell(c, d, u), b.cell(a, u, w)))
                                      for u in range(n)])
                    eqs.append(b.new_and((left, right)))
                parts.append(b.new_or(eqs))
    return b.new_and(parts)


def _top_right_identity(b: _Builder) -> int:
    n = b.n
    return b.new_or([b.new_and([b.cell(a, e, a) for a in range(n)])
                     for e in range(n)])


def _top_commutative(b: _Builder) -> int:
    n = b.n
    parts = []
    for a in range(n):
        for c in range(a + 1, n):
            parts.append(b.new_or([b.new_and((b.cell(a, c, v), b.cell(c, a, v)))
                                   for v in range(n)]))
    return b.new_and(parts)


def _top_k_combinator(b: _Builder) -> int:
    n = b.n
    ks = []
    for k in range(n):
        conj = []
        for a in range(n):
            for c in range(n):
                conj.append(b.new_or([
                    b.new_and((b.cell(k, a, m), b.cell(m, c, a)))
                    for m in range(n)]))
        ks.append(b.new_and(conj))
    return b.new_or(ks)


def encode(spec: SearchSpec) -> CnfDocument:
    """Encode the spec's constraint conjunction over an n x n table.

    A model decodes to a table satisfying exactly the constraints, so
    unsatisfiability certifies the spec has no table at this size.
    """
    _validate_spec(spec)
    n = spec.n
    core = tuple(range(2, n))
    roles = spec.roles
    b = _Builder(n, spec)
    _build_structure(b)
    for pred, polarity in spec.constraints:
        narrowed = roles if polarity else {}
        if pred == "E2PM":
            top = _top_e2pm(b)
        elif pred in _PAIR_PREDICATES:
            cands = _pair_candidates(core, narrowed)
            if not cands:
                # Dimensionally impossible; required -> empty clause.
                if polarity:
                    b.clause()
                continue
            top = _top_pair(b, cands, _PAIR_PREDICATES[pred], core)
        elif pred in _TRIPLE_PREDICATES:
            distinct, nontrivial = _TRIPLE_PREDICATES[pred]
            cands = _triple_candidates(core, narrowed, distinct)
            if not cands:
                if polarity:
                    b.clause()
                continue
            top = _top_triples(b, cands, nontrivial, core)
        elif pred == "D":
            if not core:
                if polarity:
                    b.clause()
                continue
            top = _top_dichotomy(b, core, narrowed.get("tau"))
        elif pred == "Associative":
            top = _top_associative(b)
        elif pred == "RightIdentity":
            top = _top_right_identity(b)
        elif pred == "Commutative":
            top = _top_commutative(b)
        elif pred == "KCombinator":
            top = _top_k_combinator(b)
        else:  # pragma: no cover
            raise SpecInvalid(f"unknown predicate {pred!r}")
        b.clause(top if polarity else -top)
    return CnfDocument(n=n, spec=spec, num_vars=b.num_vars, clauses=b.clauses,
                       cell_var=b.cell_var, aux_defs=b.aux_defs)


# ============================================================================
# Models
# ============================================================================

def decode(model: Iterable[int], doc: CnfDocument) -> CayleyTable:
    """Read the table out of a model; one-hot violations are rejected."""
    true_lits = set()
    for lit in model:
        if lit > 0:
            true_lits.add(lit)
    n = doc.n
    entries = []
    for i in range(n):
        for j in range(n):
            hits = [v for v in range(n) if doc.cell_var[(i, j, v)] in true_lits]
            if len(hits) != 1:
                raise ModelInconsistent(
                    f"cell ({i}, {j}) has {len(hits)} true values in the model")
            entries.append(hits[0])
    return CayleyTable(n, tuple(entries))


def table_to_model(doc: CnfDocument, table: CayleyTable) -> List[int]:
    """The canonical full model induced by a concrete table.

    Cell variables copy the table; every auxiliary variable is evaluated
    from its recorded definition, so the result assigns all variables.
    """
    if table.n != doc.n:
        raise SpecInvalid(f"table size {table.n} does not match encoding size {doc.n}")
    value: List[Optional[bool]] = [None] * (doc.num_vars + 1)
    for (i, j, v), var in doc.cell_var.items():
        value[var] = table.value(i, j) == v

    def lit_true(lit: int) -> bool:
        return value[lit] if lit > 0 else not value[-lit]

    for kind, var, lits in doc.aux_defs:
        if kind == "and":
            value[var] = all(lit_true(l) for l in lits)
        else:
            value[var] = any(lit_true(l) for l in lits)
    return [var if value[var] else -var for var in range(1, doc.num_vars + 1)]


def evaluate(doc: CnfDocument, model: Iterable[int]) -> bool:
    """Whether a full model satisfies every clause."""
    truth = {}
    for lit in model:
        truth[abs(lit)] = lit > 0
    for clause in doc.clauses:
        if not clause:
            return False
        for lit in clause:
            if truth.get(abs(lit), False) == (lit > 0):
                break
        else:
            return False
    return True


def table_satisfies(doc: CnfDocument, table: CayleyTable) -> bool:
    """CNF satisfiability with the table's cells appended as unit clauses.

    Because every auxiliary variable is two-sidedly defined, this equals
    evaluating the canonical model induced by the table.
    """
    return evaluate(doc, table_to_model(doc, table))


# ============================================================================
# DIMACS text
# ============================================================================

def to_dimacs(doc: CnfDocument) -> str:
    lines = ["c magmakit table-constraint encoding"]
    lines.append(f"c n={doc.n} constraints="
                 + ",".join(f"{'+' if pol else '-'}{p}" for p, pol in doc.spec.constraints))
    if doc.spec.fixed_roles:
        lines.append("c roles=" + ",".join(f"{k}={v}" for k, v in doc.spec.fixed_roles))
    lines.append("c var map: cell(i,j)=v  <->  variable below is true")
    for (i, j, v), var in sorted(doc.cell_var.items(), key=lambda kv: kv[1]):
        lines.append(f"c cell {i} {j} {v} -> {var}")
    lines.append(f"c auxiliary variables {len(doc.cell_var) + 1}..{doc.num_vars} "
                 "are two-sided AND/OR definitions")
    lines.append(f"p cnf {doc.num_vars} {len(doc.clauses)}")
    for clause in doc.clauses:
        lines.append(" ".join(str(l) for l in clause) + " 0")
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> Tuple[int, ...]:
    """Read a model from common solver output: signed ints, 0-terminated,
    optionally across 'v' lines."""
    lits = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith(("c", "s")):
            continue
        if line.startswith("v"):
            line = line[1:]
        for tok in line.split():
            val = int(tok)
            if val != 0:
                lits.append(val)
    return tuple(lits)


# ============================================================================
# Reference DPLL (for deciding small encodings in-process)
# ============================================================================

def solve(doc: CnfDocument, assumptions: Iterable[int] = ()) -> Optional[Tuple[int, ...]]:
    """Plain DPLL with unit propagation; None when unsatisfiable.

    Intended for small instances (validation and tests); the search
    engine, not this solver, is the production path.
    """
    assign: Dict[int, bool] = {}
    for lit in assumptions:
        var = abs(lit)
        want = lit > 0
        if assign.get(var, want) != want:
            return None
        assign[var] = want
    clauses = [tuple(c) for c in doc.clauses]

    def propagate(assign: Dict[int, bool]) -> Optional[Dict[int, bool]]:
        changed = True
        while changed:
            changed = False
            for clause in clauses:
                unassigned = None
                satisfied = False
                count = 0
                for lit in clause:
                    var = abs(lit)
                    if var in assign:
                        if assign[var] == (lit > 0):
                            satisfied = True
                            break
                    else:
                        unassigned = lit
                        count += 1
                if satisfied:
                    continue
                if count == 0:
                    return None
                if count == 1:
                    assign[abs(unassigned)] = unassigned > 0
                    changed = True
        return assign

    def dpll(assign: Dict[int, bool]) -> Optional[Dict[int, bool]]:
        assign = propagate(dict(assign))
        if assign is None:
            return None
        for var in range(1, doc.num_vars + 1):
            if var not in assign:
                for want in (True, False):
                    trial = dict(assign)
                    trial[var] = want
                    result = dpll(trial)
                    if result is not None:
                        return result
                return None
        return assign

    result = dpll(assign)
    if result is None:
        return None
    return tuple(var if result[var] else -var for var in range(1, doc.num_vars + 1))
