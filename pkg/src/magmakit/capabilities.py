"""Capability and property checkers for two-pointed magmas.

Deciders for the three capabilities — retraction pairs (R), the
classifier dichotomy (D), internal composition triples (H) — plus the
equivalent compose/inert formulation, two weakened composition variants,
and the classical checks (associativity, right identity, commutativity).
Every checker returns explicit witnesses and is deterministic: witness
lists come back in ascending lexicographic order.

The `*_raw` kernels operate on plain row tuples so the search engine can
call them on candidate tables without building validated objects; the
public functions wrap them for `E2PM` inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from .core import (
    CayleyTable,
    Decomposition,
    DichotomyViolation,
    E2PM,
    EmptyCoreError,
    PreconditionUnmet,
    decompose,
)

Rows = Sequence[Sequence[int]]


# ============================================================================
# Witness records
# ============================================================================

@dataclass(frozen=True)
class RetractionPair:
    """Core pair (s, r) with r.(s.x) = x on core.

    `mutual` records whether s.(r.x) = x also holds on core, `anchored`
    whether r.z1 = z1.  The capability-R convention is mutual + anchored.
    """

    s: int
    r: int
    mutual: bool
    anchored: bool


@dataclass(frozen=True)
class IcpTriple:
    """Pairwise-distinct core triple (a, b, c) with a.x = c.(b.x) on core,
    b core-preserving, and a taking at least two values on core."""

    a: int
    b: int
    c: int


@dataclass(frozen=True)
class DichotomyReport:
    """Outcome of the dichotomy check when no core row mixes output kinds.

    `strict_classifiers` are the classifiers whose full row (absorber
    columns included) is absorber-valued.  `holds` is the capability-D
    verdict under the reading the check was run with; `degenerate` names
    the failure mode when the partition is clean but a class is missing.
    """

    classifiers: frozenset
    nonclassifiers: frozenset
    strict_classifiers: frozenset
    strict: bool
    holds: bool
    degenerate: Optional[str]


@dataclass(frozen=True)
class CapabilityReport:
    """Aggregate of every checker on one table; all witnesses re-verify."""

    r_onesided: Tuple[RetractionPair, ...]
    r_mutual: Tuple[RetractionPair, ...]
    d: Union[DichotomyReport, DichotomyViolation, None]  # None = empty core
    h: Tuple[IcpTriple, ...]
    associative: bool
    associativity_counterexample: Optional[Tuple[int, int, int]]
    right_identity: Optional[int]
    commutative: bool
    commutativity_counterexample: Optional[Tuple[int, int]]

    @property
    def has_r(self) -> bool:
        return bool(self.r_mutual)

    @property
    def has_d(self) -> bool:
        return isinstance(self.d, DichotomyReport) and self.d.holds

    @property
    def has_h(self) -> bool:
        return bool(self.h)


# ============================================================================
# Raw kernels (plain rows, absorbers passed explicitly)
# ============================================================================

def retraction_pairs_raw(rows: Rows, z1: int, z2: int,
                         core: Sequence[int]) -> List[Tuple[int, int, bool, bool]]:
    """All (s, r, mutual, anchored) with r.(s.x) = x for every core x."""
    out = []
    for s in core:
        srow = rows[s]
        for r in core:
            rrow = rows[r]
            if all(rrow[srow[x]] == x for x in core):
                mutual = all(srow[rrow[x]] == x for x in core)
                out.append((s, r, mutual, rrow[z1] == z1))
    return out


def has_retraction_pair_raw(rows: Rows, z1: int, z2: int, core: Sequence[int],
                            require_mutual: bool, require_anchor: bool) -> bool:
    for s, r, mutual, anchored in retraction_pairs_raw(rows, z1, z2, core):
        if require_mutual and not mutual:
            continue
        if require_anchor and not anchored:
            continue
        return True
    return False


def dichotomy_raw(rows: Rows, z1: int, z2: int, core: Sequence[int],
                  strict: bool = True) -> Union[DichotomyReport, DichotomyViolation]:
    """Classify core rows by absorber-membership of their core outputs.

    Returns the first mixed element when the split fails outright;
    otherwise a report whose `holds` flag applies the requested reading
    of classifier existence (strict = over all columns).
    """
    classifiers = []
    nonclassifiers = []
    for e in core:
        row = rows[e]
        abs_in = nonabs_in = None
        for x in core:
            if row[x] == z1 or row[x] == z2:
                if abs_in is None:
                    abs_in = x
            elif nonabs_in is None:
                nonabs_in = x
            if abs_in is not None and nonabs_in is not None:
                return DichotomyViolation(e, abs_in, nonabs_in)
        if abs_in is not None:
            classifiers.append(e)
        else:
            nonclassifiers.append(e)
    strict_classifiers = [
        e for e in classifiers
        if all(v == z1 or v == z2 for v in rows[e])
    ]
    degenerate = None
    if not classifiers:
        degenerate = "no-classifier"
    elif not nonclassifiers:
        degenerate = "no-nonclassifier"
    elif strict and not strict_classifiers:
        degenerate = "no-strict-classifier"
    return DichotomyReport(
        classifiers=frozenset(classifiers),
        nonclassifiers=frozenset(nonclassifiers),
        strict_classifiers=frozenset(strict_classifiers),
        strict=strict,
        holds=degenerate is None,
        degenerate=degenerate,
    )


def has_dichotomy_raw(rows: Rows, z1: int, z2: int, core: Sequence[int],
                      strict: bool = True) -> bool:
    if not core:
        return False
    rep = dichotomy_raw(rows, z1, z2, core, strict)
    return isinstance(rep, DichotomyReport) and rep.holds


def icp_triples_raw(rows: Rows, z1: int, z2: int,
                    core: Sequence[int]) -> List[Tuple[int, int, int]]:
    """All composition triples, via composed-row lookup.

    Empty whenever fewer than three core elements exist (three pairwise
    distinct witnesses are required).
    """
    if len(core) < 3:
        return []
    by_core_row = {}
    for e in core:
        row = rows[e]
        by_core_row.setdefault(tuple(row[x] for x in core), []).append(e)
    preserving = [
        b for b in core
        if all(rows[b][x] != z1 and rows[b][x] != z2 for x in core)
    ]
    out = []
    for b in preserving:
        brow = rows[b]
        for c in core:
            if c == b:
                continue
            crow = rows[c]
            composed = tuple(crow[brow[x]] for x in core)
            if len(set(composed)) < 2:
                continue
            for a in by_core_row.get(composed, ()):
                if a != b and a != c:
                    out.append((a, b, c))
    out.sort()
    return out


def compose_inert_triples_raw(rows: Rows, z1: int, z2: int,
                              core: Sequence[int]) -> List[Tuple[int, int, int]]:
    """Pairwise-distinct non-absorber triples satisfying the operational
    compose and inert axioms with a non-trivial composite.

    Deliberately a direct enumeration, independent of the lookup-based
    composition-triple kernel, so the two can cross-check each other.
    """
    out = []
    for eta in core:
        erow = rows[eta]
        if len({erow[x] for x in core}) < 2:
            continue
        for g in core:
            if g == eta:
                continue
            grow = rows[g]
            if any(grow[x] == z1 or grow[x] == z2 for x in core):
                continue
            for rho in core:
                if rho == eta or rho == g:
                    continue
                rrow = rows[rho]
                if all(erow[x] == rrow[grow[x]] for x in core):
                    out.append((eta, g, rho))
    return out


def weak_icp_no_distinctness_raw(rows: Rows, z1: int, z2: int,
                                 core: Sequence[int]) -> List[Tuple[int, int, int]]:
    """Composition triples with the pairwise-distinctness requirement dropped."""
    out = []
    for a in core:
        arow = rows[a]
        if len({arow[x] for x in core}) < 2:
            continue
        for b in core:
            brow = rows[b]
            if any(brow[x] == z1 or brow[x] == z2 for x in core):
                continue
            for c in core:
                crow = rows[c]
                if all(arow[x] == crow[brow[x]] for x in core):
                    out.append((a, b, c))
    return out


def weak_icp_no_nontriviality_raw(rows: Rows, z1: int, z2: int,
                                  core: Sequence[int]) -> List[Tuple[int, int, int]]:
    """Composition triples with the two-distinct-values requirement dropped."""
    out = []
    for a in core:
        arow = rows[a]
        for b in core:
            if b == a:
                continue
            brow = rows[b]
            if any(brow[x] == z1 or brow[x] == z2 for x in core):
                continue
            for c in core:
                if c == a or c == b:
                    continue
                crow = rows[c]
                if all(arow[x] == crow[brow[x]] for x in core):
                    out.append((a, b, c))
    return out


def associativity_counterexample_raw(rows: Rows, n: int) -> Optional[Tuple[int, int, int]]:
    for a in range(n):
        arow = rows[a]
        for b in range(n):
            ab = arow[b]
            brow = rows[b]
            abrow = rows[ab]
            for c in range(n):
                if abrow[c] != arow[brow[c]]:
                    return (a, b, c)
    return None


def right_identity_raw(rows: Rows, n: int) -> Optional[int]:
    for e in range(n):
        if all(rows[a][e] == a for a in range(n)):
            return e
    return None


def commutativity_counterexample_raw(rows: Rows, n: int) -> Optional[Tuple[int, int]]:
    for a in range(n):
        arow = rows[a]
        for b in range(a + 1, n):
            if arow[b] != rows[b][a]:
                return (a, b)
    return None


def k_combinator_raw(rows: Rows, n: int) -> Optional[int]:
    """First k with (k.a).b = a for all a, b, if any."""
    for k in range(n):
        krow = rows[k]
        if all(rows[krow[a]][b] == a for a in range(n) for b in range(n)):
            return k
    return None


# ============================================================================
# Public checkers
# ============================================================================

def find_retraction_pairs(m: E2PM, require_mutual: bool = True,
                          require_anchor: bool = True) -> List[RetractionPair]:
    """All retraction pairs, filtered by the mutual/anchoring flags.

    The capability-R convention is both flags on; passing both off gives
    every pair satisfying only the one-sided equation.
    """
    out = []
    for s, r, mutual, anchored in retraction_pairs_raw(m.rows, m.z1, m.z2, m.core):
        if require_mutual and not mutual:
            continue
        if require_anchor and not anchored:
            continue
        out.append(RetractionPair(s, r, mutual, anchored))
    return out


def check_dichotomy(m: E2PM, strict: bool = True) -> Union[DichotomyReport, DichotomyViolation]:
    """Dichotomy report for the table; raises EmptyCoreError on empty core."""
    if not m.core:
        raise EmptyCoreError("dichotomy is degenerate: the core is empty")
    return dichotomy_raw(m.rows, m.z1, m.z2, m.core, strict)


def find_icp_triples(m: E2PM) -> List[IcpTriple]:
    return [IcpTriple(*t) for t in icp_triples_raw(m.rows, m.z1, m.z2, m.core)]


def find_compose_inert_triples(m: E2PM) -> List[Tuple[int, int, int]]:
    return compose_inert_triples_raw(m.rows, m.z1, m.z2, m.core)


def find_weak_icp_no_distinctness(m: E2PM) -> List[Tuple[int, int, int]]:
    return weak_icp_no_distinctness_raw(m.rows, m.z1, m.z2, m.core)


def find_weak_icp_no_nontriviality(m: E2PM) -> List[Tuple[int, int, int]]:
    return weak_icp_no_nontriviality_raw(m.rows, m.z1, m.z2, m.core)


def is_associative(m: CayleyTable) -> Tuple[bool, Optional[Tuple[int, int, int]]]:
    """Whether (a.b).c = a.(b.c) everywhere, with the first violation if not."""
    cex = associativity_counterexample_raw(m.rows, m.n)
    return (cex is None, cex)


def right_identity(m: CayleyTable) -> Optional[int]:
    return right_identity_raw(m.rows, m.n)


def is_commutative(m: CayleyTable) -> Tuple[bool, Optional[Tuple[int, int]]]:
    cex = commutativity_counterexample_raw(m.rows, m.n)
    return (cex is None, cex)


def verify_placement(m: E2PM) -> bool:
    """Both members of every capability-R pair sit among the non-classifiers.

    Precondition: the table has a mutual anchored pair and satisfies the
    dichotomy; PreconditionUnmet otherwise.
    """
    pairs = find_retraction_pairs(m, require_mutual=True, require_anchor=True)
    if not pairs:
        raise PreconditionUnmet("no mutual anchored retraction pair")
    dec = decompose(m)
    if not isinstance(dec, Decomposition):
        raise PreconditionUnmet("dichotomy fails, no decomposition to place pairs in")
    rep = check_dichotomy(m)
    if not (isinstance(rep, DichotomyReport) and rep.holds):
        raise PreconditionUnmet("classifier dichotomy does not hold")
    nc = dec.nonclassifiers
    return all(p.s in nc and p.r in nc for p in pairs)


def full_report(m: E2PM, strict: bool = True) -> CapabilityReport:
    """Run every checker on one table."""
    rows, z1, z2, core = m.rows, m.z1, m.z2, m.core
    pairs = [RetractionPair(*t) for t in retraction_pairs_raw(rows, z1, z2, core)]
    d = dichotomy_raw(rows, z1, z2, core, strict) if core else None
    assoc_ok, assoc_cex = is_associative(m.table)
    comm_ok, comm_cex = is_commutative(m.table)
    return CapabilityReport(
        r_onesided=tuple(p for p in pairs if p.anchored),
        r_mutual=tuple(p for p in pairs if p.anchored and p.mutual),
        d=d,
        h=tuple(IcpTriple(*t) for t in icp_triples_raw(rows, z1, z2, core)),
        associative=assoc_ok,
        associativity_counterexample=assoc_cex,
        right_identity=right_identity_raw(rows, m.n),
        commutative=comm_ok,
        commutativity_counterexample=comm_cex,
    )
