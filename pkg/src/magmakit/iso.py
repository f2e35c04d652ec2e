"""Absorber-preserving isomorphisms: transport, enumeration, invariance.

An isomorphism between two-pointed magmas is an operation-preserving
bijection sending each designated absorber of the source to the same
designated absorber of the target.  Transport along such a bijection
relabels a table in place; the checkers here verify that the core
decomposition and all capability witnesses ride along element-wise.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations
from typing import Iterator, List, Sequence, Tuple

from .core import (
    Decomposition,
    E2PM,
    MagmaError,
    PreconditionUnmet,
    check_permutation,
    decompose,
    relabel,
    validate_e2pm,
)
from .capabilities import (
    CapabilityReport,
    DichotomyReport,
    check_dichotomy,
    full_report,
)


class SizeMismatch(MagmaError):
    """The two tables have different carrier sizes."""


class AbsorberNotFixed(MagmaError):
    """The bijection does not send absorbers to absorbers as required."""


@dataclass(frozen=True)
class IsoWitness:
    """A bijection on [0, n), stored as the image sequence."""

    perm: Tuple[int, ...]
    fixes_absorbers: bool


# ============================================================================
# Transport
# ============================================================================

def transport(m: E2PM, perm: Sequence[int]) -> E2PM:
    """Relabel along perm: result(perm(a), perm(b)) = perm(m(a, b)).

    perm must fix each designated absorber individually; the result is a
    valid structure with the same absorbers.
    """
    perm = check_permutation(perm, m.n)
    if perm[m.z1] != m.z1 or perm[m.z2] != m.z2:
        raise AbsorberNotFixed(
            f"perm sends absorbers ({m.z1}, {m.z2}) to "
            f"({perm[m.z1]}, {perm[m.z2]})")
    return validate_e2pm(relabel(m.table, perm), m.z1, m.z2)


def absorber_fixing_permutations(m: E2PM) -> Iterator[Tuple[int, ...]]:
    """All (n-2)! permutations fixing both absorbers, in lexicographic order."""
    core = m.core
    for images in permutations(core):
        perm = list(range(m.n))
        for src, dst in zip(core, images):
            perm[src] = dst
        yield tuple(perm)


def sample_absorber_fixing_permutation(m: E2PM, rng: random.Random) -> Tuple[int, ...]:
    """One uniformly random absorber-fixing permutation."""
    images = list(m.core)
    rng.shuffle(images)
    perm = list(range(m.n))
    for src, dst in zip(m.core, images):
        perm[src] = dst
    return tuple(perm)


# ============================================================================
# Isomorphism enumeration
# ============================================================================

def find_isomorphisms(m1: E2PM, m2: E2PM) -> List[IsoWitness]:
    """All absorber-preserving isomorphisms m1 -> m2.

    Enumerates the (n-2)! core bijections; each candidate check aborts at
    the first cell where the homomorphism equation fails.
    """
    if m1.n != m2.n:
        raise SizeMismatch(f"sizes differ: {m1.n} vs {m2.n}")
    n = m1.n
    rows1, rows2 = m1.rows, m2.rows
    out = []
    for images in permutations(m2.core):
        perm = [0] * n
        perm[m1.z1] = m2.z1
        perm[m1.z2] = m2.z2
        for src, dst in zip(m1.core, images):
            perm[src] = dst
        if _is_isomorphism(rows1, rows2, perm, n):
            out.append(IsoWitness(tuple(perm), fixes_absorbers=True))
    return out


def _is_isomorphism(rows1, rows2, perm, n) -> bool:
    for a in range(n):
        pa = perm[a]
        row1 = rows1[a]
        row2 = rows2[pa]
        for b in range(n):
            if perm[row1[b]] != row2[perm[b]]:
                return False
    return True


# ============================================================================
# Invariance checks
# ============================================================================

def _map_pairs(pairs, perm):
    return sorted((perm[p.s], perm[p.r]) for p in pairs)


def _map_triples(triples, perm):
    return sorted((perm[t.a], perm[t.b], perm[t.c]) for t in triples)


def verify_functoriality(m: E2PM, perm: Sequence[int]) -> bool:
    """The decomposition of the transported table is the perm-image of the
    original decomposition, class by class.

    Precondition: m satisfies the dichotomy and perm fixes the absorbers.
    """
    rep = check_dichotomy(m)
    if not (isinstance(rep, DichotomyReport) and rep.holds):
        raise PreconditionUnmet("functoriality is stated for tables satisfying the dichotomy")
    d1 = decompose(m)
    if not isinstance(d1, Decomposition):
        raise PreconditionUnmet("no decomposition to transport")  # pragma: no cover
    t = transport(m, perm)
    d2 = decompose(t)
    if not isinstance(d2, Decomposition):
        return False
    perm = check_permutation(perm, m.n)
    return (
        frozenset(perm[z] for z in d1.zeros) == d2.zeros
        and frozenset(perm[c] for c in d1.classifiers) == d2.classifiers
        and frozenset(perm[x] for x in d1.nonclassifiers) == d2.nonclassifiers
    )


def verify_capability_invariance(m: E2PM, perm: Sequence[int]) -> bool:
    """Capability flags agree between m and its transport, and every
    witness list corresponds element-wise under perm."""
    perm = check_permutation(perm, m.n)
    t = transport(m, perm)
    a = full_report(m)
    b = full_report(t)
    return reports_correspond(a, b, perm)


def reports_correspond(a: CapabilityReport, b: CapabilityReport,
                       perm: Sequence[int]) -> bool:
    """Flag equality plus element-wise transport of witness sets."""
    if (a.has_r, a.has_d, a.has_h) != (b.has_r, b.has_d, b.has_h):
        return False
    if _map_pairs(a.r_mutual, perm) != sorted((p.s, p.r) for p in b.r_mutual):
        return False
    if _map_pairs(a.r_onesided, perm) != sorted((p.s, p.r) for p in b.r_onesided):
        return False
    if _map_triples(a.h, perm) != sorted((t.a, t.b, t.c) for t in b.h):
        return False
    if isinstance(a.d, DichotomyReport) and isinstance(b.d, DichotomyReport):
        if frozenset(perm[c] for c in a.d.classifiers) != b.d.classifiers:
            return False
        if frozenset(perm[x] for x in a.d.nonclassifiers) != b.d.nonclassifiers:
            return False
    elif type(a.d) is not type(b.d):
        return False
    if (a.associative, a.commutative) != (b.associative, b.commutative):
        return False
    if (a.right_identity is None) != (b.right_identity is None):
        return False
    return True
