"""Cayley tables and two-pointed extensional magmas.

A Cayley table is the full n x n value grid of a binary operation on
{0..n-1}.  The validated structure everything else builds on is a table
with two designated left-absorbers and pairwise-distinct rows.  This
module owns validation, the zero/classifier/non-classifier decomposition
of the core, and relabeling (used by normalization and by the
isomorphism machinery).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Tuple, Union


# ============================================================================
# Errors
# ============================================================================

class MagmaError(Exception):
    """Base class for all toolkit errors."""


class DomainError(MagmaError):
    """A table entry or element index is outside [0, n)."""


class ValidationError(MagmaError):
    """A table fails one of the two-pointed-magma axioms."""


class SameAbsorbers(ValidationError):
    def __init__(self, z: int):
        super().__init__(f"designated absorbers coincide at {z}")
        self.z = z


class AbsorberMissing(ValidationError):
    def __init__(self, z: int):
        super().__init__(f"element {z} is not a left-absorber (row {z} is not constant {z})")
        self.z = z


class ExtraAbsorber(ValidationError):
    def __init__(self, e: int):
        super().__init__(f"element {e} is an undesignated left-absorber")
        self.e = e


class ExtensionalityViolation(ValidationError):
    def __init__(self, a: int, b: int):
        super().__init__(f"elements {a} and {b} have identical rows")
        self.a = a
        self.b = b


class EmptyCoreError(MagmaError):
    """Raised when an operation needs core elements and there are none."""


class NotPermutation(MagmaError):
    """The given sequence is not a permutation of [0, n)."""


class PreconditionUnmet(MagmaError):
    """An operation's stated precondition does not hold for the input."""


# ============================================================================
# Tables
# ============================================================================

@dataclass(frozen=True)
class CayleyTable:
    """An n x n total binary operation on {0..n-1}, stored row-major."""

    n: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if self.n < 1:
            raise DomainError(f"carrier size must be >= 1, got {self.n}")
        if len(self.entries) != self.n * self.n:
            raise DomainError(
                f"expected {self.n * self.n} entries for n={self.n}, got {len(self.entries)}"
            )
        for k, v in enumerate(self.entries):
            if not 0 <= v < self.n:
                raise DomainError(
                    f"entry {v} at cell ({k // self.n}, {k % self.n}) outside [0, {self.n})"
                )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "CayleyTable":
        n = len(rows)
        flat = []
        for row in rows:
            if len(row) != n:
                raise DomainError(f"row of length {len(row)} in an n={n} table")
            flat.extend(row)
        return cls(n, tuple(flat))

    @cached_property
    def rows(self) -> Tuple[Tuple[int, ...], ...]:
        n = self.n
        return tuple(self.entries[i * n:(i + 1) * n] for i in range(n))

    def value(self, a: int, b: int) -> int:
        return self.entries[a * self.n + b]


def check_permutation(perm: Sequence[int], n: int) -> Tuple[int, ...]:
    """Return perm as a tuple after verifying it is a bijection on [0, n)."""
    perm = tuple(perm)
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise NotPermutation(f"{perm} is not a permutation of [0, {n})")
    return perm


def relabel(table: CayleyTable, perm: Sequence[int]) -> CayleyTable:
    """Rename elements along a bijection: new(p(a), p(b)) = p(old(a, b))."""
    n = table.n
    perm = check_permutation(perm, n)
    entries = [0] * (n * n)
    old = table.entries
    for a in range(n):
        pa = perm[a] * n
        base = a * n
        for b in range(n):
            entries[pa + perm[b]] = perm[old[base + b]]
    return CayleyTable(n, tuple(entries))


# ============================================================================
# Two-pointed extensional magmas
# ============================================================================

@dataclass(frozen=True)
class E2PM:
    """A validated table with two designated, distinct left-absorbers.

    Construction validates the three axioms in a fixed order so error
    messages are deterministic: absorber checks first (designated ones,
    then an ascending scan for undesignated absorbers), extensionality
    last (first violating pair in ascending lexicographic order).
    """

    table: CayleyTable
    z1: int
    z2: int

    def __post_init__(self):
        n = self.table.n
        for z in (self.z1, self.z2):
            if not 0 <= z < n:
                raise DomainError(f"absorber index {z} outside [0, {n})")
        if self.z1 == self.z2:
            raise SameAbsorbers(self.z1)
        rows = self.table.rows
        for z in (self.z1, self.z2):
            if any(v != z for v in rows[z]):
                raise AbsorberMissing(z)
        for e in range(n):
            if e in (self.z1, self.z2):
                continue
            if all(v == e for v in rows[e]):
                raise ExtraAbsorber(e)
        seen = {}
        for a in range(n):
            other = seen.get(rows[a])
            if other is not None:
                raise ExtensionalityViolation(other, a)
            seen[rows[a]] = a

    @property
    def n(self) -> int:
        return self.table.n

    @cached_property
    def core(self) -> Tuple[int, ...]:
        return tuple(e for e in range(self.n) if e != self.z1 and e != self.z2)

    @property
    def rows(self) -> Tuple[Tuple[int, ...], ...]:
        return self.table.rows

    def value(self, a: int, b: int) -> int:
        return self.table.value(a, b)


def validate_e2pm(table: CayleyTable, z1: int, z2: int) -> E2PM:
    """Validate the axioms and return the structure; raises ValidationError."""
    return E2PM(table, z1, z2)


def core_elements(m: E2PM) -> Tuple[int, ...]:
    """All elements except the two absorbers, ascending."""
    return m.core


# ============================================================================
# Decomposition
# ============================================================================

@dataclass(frozen=True)
class Decomposition:
    """Partition of the carrier into absorbers, classifiers, non-classifiers.

    A core element is a classifier when its row restricted to core lands
    entirely in the absorber pair, a non-classifier when it avoids the
    absorbers entirely.
    """

    zeros: frozenset
    classifiers: frozenset
    nonclassifiers: frozenset


@dataclass(frozen=True)
class DichotomyViolation:
    """A core element whose core row mixes absorber and non-absorber outputs.

    `absorber_input` and `nonabsorber_input` are the first core columns
    (ascending) witnessing each kind of output.
    """

    element: int
    absorber_input: int
    nonabsorber_input: int


def decompose(m: E2PM) -> Union[Decomposition, DichotomyViolation]:
    """Split the core by absorber-membership of core-column outputs.

    Returns the first mixed element (ascending) instead of a partition
    when some row mixes the two kinds.  Raises EmptyCoreError when there
    is nothing to classify.
    """
    core = m.core
    if not core:
        raise EmptyCoreError("decomposition is degenerate: the core is empty")
    rows = m.rows
    absorbers = (m.z1, m.z2)
    classifiers = []
    nonclassifiers = []
    for e in core:
        row = rows[e]
        abs_in = nonabs_in = None
        for x in core:
            if row[x] in absorbers:
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
    return Decomposition(
        zeros=frozenset(absorbers),
        classifiers=frozenset(classifiers),
        nonclassifiers=frozenset(nonclassifiers),
    )


# ============================================================================
# Normalization
# ============================================================================

def _normalizing_perm(n: int, z1: int, z2: int) -> Tuple[int, ...]:
    # Product of at most two transpositions sending z1 -> 0 and z2 -> 1,
    # fixing every element not touched by the swaps.
    perm = list(range(n))

    def swap(i, j):
        perm[i], perm[j] = perm[j], perm[i]

    if perm[z1] != 0:
        src = perm.index(0)
        swap(z1, src)
    if perm[z2] != 1:
        src = perm.index(1)
        swap(z2, src)
    return tuple(perm)


def normalize(m: E2PM) -> E2PM:
    """Relabel so the absorbers sit at 0 and 1; idempotent."""
    if m.z1 == 0 and m.z2 == 1:
        return m
    perm = _normalizing_perm(m.n, m.z1, m.z2)
    return E2PM(relabel(m.table, perm), 0, 1)
