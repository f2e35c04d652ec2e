"""Frozen witness tables and the table file formats.

Twelve named Cayley tables ship embedded in the build, each with its
role annotations and the capability flags it is expected to exhibit.
They are the reference corpus for the golden test suite: independence
counterexamples in all six directions plus coexistence witnesses.  A
thirteenth table, reproduced by search rather than transcribed, isolates
the non-triviality condition of the composition property (see
`magmakit.search.derive_nontriviality_separation`).

Two interchange formats are supported:

* text grid — first line ``n z1 z2``, then n rows of n space-separated
  integers; `save_table` emits the canonical form (single spaces,
  newline-terminated rows) and `load_table` is its exact inverse.
* structured JSON — object with fields ``name``, ``n``, ``z1``, ``z2``,
  ``rows`` and optional ``roles``, ``expected``, ``derived``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .core import CayleyTable, E2PM, DomainError, MagmaError, validate_e2pm


class ParseError(MagmaError):
    """Malformed table document; carries a 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


# ============================================================================
# Witness records
# ============================================================================

@dataclass(frozen=True)
class ExpectedSummary:
    """Capability flags a corpus table is expected to exhibit, with the
    named witnesses where a specific pair/triple/class is pinned down."""

    has_r: bool
    has_d: bool
    has_h: bool
    r_pair: Optional[Tuple[int, int]] = None
    icp_triple: Optional[Tuple[int, int, int]] = None
    classifiers: Optional[frozenset] = None
    nonclassifiers: Optional[frozenset] = None
    violation_element: Optional[int] = None
    no_retraction_pair_at_all: bool = False


@dataclass(frozen=True)
class NamedWitness:
    name: str
    table: E2PM
    description: str
    roles: Dict[str, object] = field(default_factory=dict)
    expected: Optional[ExpectedSummary] = None
    derived: bool = False


def _witness(name, rows, description, roles, expected, derived=False):
    table = validate_e2pm(CayleyTable.from_rows(rows), 0, 1)
    return NamedWitness(name, table, description, roles, expected, derived)


# ============================================================================
# The twelve frozen tables
# ============================================================================

_CORPUS_DEFS = [
    _witness(
        "kripke4",
        [(0, 0, 0, 0),
         (1, 1, 1, 1),
         (0, 1, 0, 1),
         (0, 0, 2, 3)],
        "size-4 minimal witness with a retraction pair (s = r) and the dichotomy",
        {"s": 3, "r": 3, "tau": (2,)},
        ExpectedSummary(has_r=True, has_d=True, has_h=False,
                        r_pair=(3, 3),
                        classifiers=frozenset({2}), nonclassifiers=frozenset({3})),
    ),
    _witness(
        "kripke5",
        [(0, 0, 0, 0, 0),
         (1, 1, 1, 1, 1),
         (1, 0, 3, 4, 2),
         (0, 2, 4, 2, 3),
         (0, 1, 1, 0, 0)],
        "size-5 minimal witness with a split retraction pair (s != r) and the dichotomy",
        {"s": 2, "r": 3, "tau": (4,)},
        ExpectedSummary(has_r=True, has_d=True, has_h=False, r_pair=(2, 3)),
    ),
    _witness(
        "witness5",
        [(0, 0, 0, 0, 0),
         (1, 1, 1, 1, 1),
         (0, 2, 2, 3, 4),
         (0, 0, 0, 1, 0),
         (0, 1, 0, 1, 0)],
        "size-5 coexistence witness: all three capabilities, minimal carrier",
        {"s": 2, "r": 2, "a": 3, "b": 2, "c": 4, "tau": (3, 4)},
        ExpectedSummary(has_r=True, has_d=True, has_h=True,
                        r_pair=(2, 2), icp_triple=(3, 2, 4),
                        classifiers=frozenset({3, 4}), nonclassifiers=frozenset({2})),
    ),
    _witness(
        "witness6",
        [(0, 0, 0, 0, 0, 0),
         (1, 1, 1, 1, 1, 1),
         (3, 3, 4, 2, 5, 3),
         (0, 1, 3, 5, 2, 4),
         (0, 0, 1, 0, 1, 1),
         (2, 2, 5, 4, 3, 2)],
        "size-6 coexistence witness with a non-degenerate retraction pair",
        {"s": 2, "r": 3, "a": 2, "b": 3, "c": 5, "tau": (4,)},
        ExpectedSummary(has_r=True, has_d=True, has_h=True,
                        r_pair=(2, 3), icp_triple=(2, 3, 5)),
    ),
    _witness(
        "witness10",
        [(0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
         (1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
         (3, 3, 4, 3, 7, 5, 9, 6, 8, 2),
         (0, 1, 9, 3, 2, 5, 7, 4, 8, 6),
         (0, 0, 1, 1, 1, 0, 0, 0, 1, 1),
         (2, 2, 7, 2, 8, 9, 4, 3, 4, 2),
         (0, 0, 6, 4, 8, 7, 3, 3, 4, 9),
         (2, 2, 6, 4, 8, 9, 4, 3, 4, 9),
         (2, 2, 4, 8, 4, 3, 4, 4, 8, 9),
         (3, 4, 7, 3, 9, 2, 2, 9, 2, 3)],
        "size-10 coexistence witness with eight pairwise-distinct role carriers",
        {"s": 2, "r": 3, "tau": (4,), "a": 8, "b": 6, "c": 7},
        ExpectedSummary(has_r=True, has_d=True, has_h=True,
                        r_pair=(2, 3), icp_triple=(8, 6, 7)),
    ),
    _witness(
        "countermodel8",
        [(0, 0, 0, 0, 0, 0, 0, 0),
         (1, 1, 1, 1, 1, 1, 1, 1),
         (3, 3, 7, 3, 4, 6, 5, 2),
         (0, 1, 7, 3, 4, 6, 5, 2),
         (0, 0, 0, 0, 0, 0, 1, 0),
         (6, 2, 6, 2, 1, 1, 1, 1),
         (0, 0, 5, 2, 2, 2, 2, 2),
         (2, 2, 2, 1, 2, 2, 6, 3)],
        "size-8 retraction pair without the dichotomy: element 5 mixes output kinds",
        {"s": 2, "r": 3, "tau": (4,), "mixed": (5, 7)},
        ExpectedSummary(has_r=True, has_d=False, has_h=False,
                        r_pair=(2, 3), violation_element=5),
    ),
    _witness(
        "sNoH6",
        [(0, 0, 0, 0, 0, 0),
         (1, 1, 1, 1, 1, 1),
         (0, 3, 3, 2, 5, 4),
         (2, 4, 5, 5, 1, 4),
         (5, 3, 0, 0, 3, 2),
         (4, 2, 2, 2, 2, 2)],
        "size-6 retraction pair (core involution) with no composition triple "
        "despite four core elements",
        {"s": 2, "r": 2},
        ExpectedSummary(has_r=True, has_d=False, has_h=False,
                        r_pair=(2, 2), violation_element=3),
    ),
    _witness(
        "dNotH10",
        [(0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
         (1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
         (3, 3, 2, 3, 4, 5, 6, 7, 9, 8),
         (0, 1, 2, 3, 4, 5, 6, 7, 9, 8),
         (0, 0, 1, 1, 1, 1, 1, 1, 1, 1),
         (1, 0, 0, 0, 0, 0, 0, 0, 0, 0),
         (2, 3, 9, 9, 9, 9, 9, 9, 9, 8),
         (3, 2, 9, 9, 9, 9, 9, 9, 9, 8),
         (1, 0, 1, 0, 1, 1, 1, 1, 0, 0),
         (0, 1, 0, 1, 0, 1, 1, 0, 1, 1)],
        "size-10 dichotomy without composition: eight core elements, no triple",
        {"s": 2, "r": 3, "tau": (4,)},
        ExpectedSummary(has_r=True, has_d=True, has_h=False, r_pair=(2, 3)),
    ),
    _witness(
        "hNotD10",
        [(0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
         (1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
         (3, 1, 3, 4, 9, 6, 8, 5, 7, 2),
         (0, 1, 9, 2, 3, 7, 5, 8, 6, 4),
         (0, 0, 1, 1, 1, 1, 1, 1, 0, 0),
         (0, 0, 2, 0, 0, 0, 0, 0, 3, 1),
         (2, 2, 2, 8, 3, 9, 4, 7, 9, 7),
         (8, 3, 2, 8, 3, 9, 4, 7, 3, 1),
         (9, 2, 2, 3, 8, 1, 3, 7, 1, 7),
         (2, 2, 2, 2, 4, 7, 6, 7, 2, 0)],
        "size-10 composition without the dichotomy: element 5 mixes output kinds",
        {"s": 2, "r": 3, "tau": (4,), "a": 8, "b": 6, "c": 7, "mixed": (5,)},
        ExpectedSummary(has_r=True, has_d=False, has_h=True,
                        r_pair=(2, 3), icp_triple=(8, 6, 7), violation_element=5),
    ),
    _witness(
        "dNotS4",
        [(0, 0, 0, 0),
         (1, 1, 1, 1),
         (0, 1, 1, 1),
         (2, 3, 2, 2)],
        "size-4 dichotomy with no retraction pair among the four core assignments",
        {"tau": (2,)},
        ExpectedSummary(has_r=False, has_d=True, has_h=False,
                        classifiers=frozenset({2}), nonclassifiers=frozenset({3}),
                        no_retraction_pair_at_all=True),
    ),
    _witness(
        "hNotS5",
        [(0, 0, 0, 0, 0),
         (1, 1, 1, 1, 1),
         (3, 1, 0, 3, 1),
         (2, 4, 3, 4, 2),
         (2, 2, 1, 0, 3)],
        "size-5 composition with no retraction pair",
        {},
        ExpectedSummary(has_r=False, has_d=False, has_h=True,
                        violation_element=2, no_retraction_pair_at_all=True),
    ),
    _witness(
        "hNotD5",
        [(0, 0, 0, 0, 0),
         (1, 1, 1, 1, 1),
         (3, 3, 4, 3, 3),
         (2, 4, 4, 4, 3),
         (2, 2, 2, 4, 4)],
        "size-5 composition with no classifier: every core row stays inside core",
        {},
        ExpectedSummary(has_r=False, has_d=False, has_h=True),
    ),
]

_BY_NAME = {w.name: w for w in _CORPUS_DEFS}

CORPUS_NAMES = tuple(w.name for w in _CORPUS_DEFS)


def corpus_all() -> List[NamedWitness]:
    """The twelve frozen tables, stable order."""
    return list(_CORPUS_DEFS)


def corpus_by_name(name: str) -> NamedWitness:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise KeyError(f"no corpus table named {name!r}; known: {', '.join(CORPUS_NAMES)}")


# The size-6 table separating the weakened (no non-triviality) composition
# variant from the full one.  Reproduced, not transcribed: the search in
# `derive_nontriviality_separation` re-finds exactly this table, and the
# test suite asserts the equality.
_SEPARATION6_ROWS = (
    (0, 0, 0, 0, 0, 0),
    (1, 1, 1, 1, 1, 1),
    (0, 0, 2, 3, 4, 5),
    (0, 0, 1, 1, 1, 1),
    (0, 1, 1, 1, 1, 1),
    (0, 0, 0, 0, 0, 1),
)


def derived_separation_witness() -> NamedWitness:
    """Search-derived size-6 table: weakened composition holds, full fails."""
    return _witness(
        "separation6",
        _SEPARATION6_ROWS,
        "size-6 retraction-pair table where a constant-on-core element factors "
        "through the identity, so the no-non-triviality weakening holds while "
        "the full composition property fails",
        {"s": 2, "r": 2, "a": 3, "b": 2, "c": 4},
        ExpectedSummary(has_r=True, has_d=True, has_h=False, r_pair=(2, 2)),
        derived=True,
    )


# ============================================================================
# File formats
# ============================================================================

@dataclass(frozen=True)
class LoadedTable:
    """Result of parsing a table document in either format."""

    table: CayleyTable
    z1: int
    z2: int
    name: Optional[str] = None
    roles: Optional[dict] = None
    expected: Optional[dict] = None


def _parse_grid(text: str) -> LoadedTable:
    lines = text.splitlines()
    meaningful = [(i + 1, ln.strip()) for i, ln in enumerate(lines)
                  if ln.strip() and not ln.lstrip().startswith("#")]
    if not meaningful:
        raise ParseError("empty document", 1)
    lineno, header = meaningful[0]
    parts = header.split()
    if len(parts) != 3:
        raise ParseError(f"expected header 'n z1 z2', got {header!r}", lineno)
    try:
        n, z1, z2 = (int(p) for p in parts)
    except ValueError:
        raise ParseError(f"non-integer header field in {header!r}", lineno)
    body = meaningful[1:]
    if len(body) != n:
        raise ParseError(f"expected {n} rows, got {len(body)}",
                         body[-1][0] if body else lineno)
    rows = []
    for lineno, ln in body:
        try:
            row = [int(tok) for tok in ln.split()]
        except ValueError:
            raise ParseError(f"non-integer entry in row {ln!r}", lineno)
        if len(row) != n:
            raise ParseError(f"expected {n} entries, got {len(row)}", lineno)
        for v in row:
            if not 0 <= v < n:
                raise DomainError(f"line {lineno}: entry {v} outside [0, {n})")
        rows.append(row)
    for z in (z1, z2):
        if not 0 <= z < n:
            raise DomainError(f"absorber index {z} outside [0, {n})")
    return LoadedTable(CayleyTable.from_rows(rows), z1, z2)


def _parse_structured(text: str) -> LoadedTable:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno)
    for key in ("n", "z1", "z2", "rows"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}", 1)
    n = doc["n"]
    rows = doc["rows"]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ParseError(f"rows do not form an {n} x {n} grid", 1)
    for r in rows:
        for v in r:
            if not isinstance(v, int) or not 0 <= v < n:
                raise DomainError(f"entry {v!r} outside [0, {n})")
    roles = doc.get("roles")
    if roles is not None:
        roles = {k: tuple(v) if isinstance(v, list) else v for k, v in roles.items()}
    return LoadedTable(CayleyTable.from_rows(rows), doc["z1"], doc["z2"],
                       name=doc.get("name"), roles=roles,
                       expected=doc.get("expected"))


def load_table(text: str) -> LoadedTable:
    """Parse a table document in either the grid or the structured format."""
    stripped = text.lstrip()
    if not stripped:
        raise ParseError("empty document", 1)
    if stripped.startswith("{"):
        return _parse_structured(text)
    return _parse_grid(text)


def save_table(table: CayleyTable, z1: int, z2: int, name: Optional[str] = None) -> str:
    """Canonical grid form; load_table(save_table(...)) round-trips exactly."""
    lines = []
    if name:
        lines.append(f"# {name}")
    lines.append(f"{table.n} {z1} {z2}")
    for row in table.rows:
        lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def verify_witness(w: NamedWitness, strict: bool = True) -> List[str]:
    """Compare a witness against its expected summary; [] means a match.

    Checks the capability flags, every named pair/triple/class the entry
    pins down, and that role annotations re-verify against the table.
    """
    from . import capabilities as caps

    problems: List[str] = []
    m = w.table
    rep = caps.full_report(m, strict=strict)
    exp = w.expected
    if exp is None:
        return problems
    for label, got, want in (("R", rep.has_r, exp.has_r),
                             ("D", rep.has_d, exp.has_d),
                             ("H", rep.has_h, exp.has_h)):
        if got != want:
            problems.append(f"capability {label}: expected {want}, checker says {got}")
    mutual_pairs = [(p.s, p.r) for p in rep.r_mutual]
    if exp.r_pair is not None and exp.r_pair not in mutual_pairs:
        problems.append(f"named pair {exp.r_pair} missing from {mutual_pairs}")
    triples = [(t.a, t.b, t.c) for t in rep.h]
    if exp.icp_triple is not None and exp.icp_triple not in triples:
        problems.append(f"named triple {exp.icp_triple} missing from {triples}")
    if isinstance(rep.d, caps.DichotomyReport):
        if exp.classifiers is not None and rep.d.classifiers != exp.classifiers:
            problems.append(f"classifiers {sorted(rep.d.classifiers)} != "
                            f"expected {sorted(exp.classifiers)}")
        if exp.nonclassifiers is not None and rep.d.nonclassifiers != exp.nonclassifiers:
            problems.append(f"non-classifiers {sorted(rep.d.nonclassifiers)} != "
                            f"expected {sorted(exp.nonclassifiers)}")
        if exp.violation_element is not None:
            problems.append(f"expected a dichotomy violation at {exp.violation_element}")
    else:
        if exp.classifiers is not None or exp.nonclassifiers is not None:
            problems.append("expected a clean partition, got a violation")
        if exp.violation_element is not None and (
                not hasattr(rep.d, "element") or rep.d.element != exp.violation_element):
            problems.append(f"violation element is {getattr(rep.d, 'element', None)}, "
                            f"expected {exp.violation_element}")
    if exp.no_retraction_pair_at_all:
        bare = caps.find_retraction_pairs(m, require_mutual=False, require_anchor=False)
        if bare:
            problems.append(f"expected no retraction pair at all, found {bare}")
    if rep.commutative:
        problems.append("table is commutative, impossible with two absorbers")
    if rep.has_r and rep.has_d:
        if rep.associative:
            problems.append("retraction pair + dichotomy must break associativity")
        if rep.right_identity is not None:
            problems.append("retraction pair + dichotomy must exclude a right identity")
    # Role annotations re-verify directly against the table.
    roles = w.roles or {}
    if "s" in roles and "r" in roles and (roles["s"], roles["r"]) not in mutual_pairs:
        problems.append(f"role pair ({roles['s']},{roles['r']}) fails re-check")
    for t in roles.get("tau", ()):
        if any(v not in (m.z1, m.z2) for v in m.rows[t]):
            problems.append(f"role classifier {t} is not absorber-valued everywhere")
    if all(k in roles for k in ("a", "b", "c")):
        triple = (roles["a"], roles["b"], roles["c"])
        pool = triples if exp.has_h else caps.find_weak_icp_no_nontriviality(m)
        if triple not in pool:
            problems.append(f"role triple {triple} fails re-check")
    for e in roles.get("mixed", ()):
        row = m.rows[e]
        kinds = {row[x] in (m.z1, m.z2) for x in m.core}
        if kinds != {True, False}:
            problems.append(f"role element {e} does not mix output kinds on core")
    return problems


def save_structured(w: NamedWitness) -> str:
    """Structured JSON form carrying name, roles and expected flags."""
    doc: dict = {
        "name": w.name,
        "n": w.table.n,
        "z1": w.table.z1,
        "z2": w.table.z2,
        "rows": [list(r) for r in w.table.rows],
    }
    if w.roles:
        doc["roles"] = {k: (list(v) if isinstance(v, tuple) else v)
                        for k, v in w.roles.items()}
    if w.expected is not None:
        doc["expected"] = {
            "r": w.expected.has_r,
            "d": w.expected.has_d,
            "h": w.expected.has_h,
        }
    if w.derived:
        doc["derived"] = True
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
