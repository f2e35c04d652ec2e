"""Verification and exhaustive-search toolkit for finite two-pointed
extensional magmas: capability checkers with explicit witnesses, a frozen
reference corpus, a certifying backtracking search, isomorphism transport,
and a DIMACS export of search problems."""

__version__ = "0.1.0"

from .core import (  # noqa: F401
    CayleyTable,
    Decomposition,
    DichotomyViolation,
    E2PM,
    core_elements,
    decompose,
    normalize,
    validate_e2pm,
)
from .capabilities import (  # noqa: F401
    CapabilityReport,
    IcpTriple,
    RetractionPair,
    check_dichotomy,
    find_compose_inert_triples,
    find_icp_triples,
    find_retraction_pairs,
    find_weak_icp_no_distinctness,
    find_weak_icp_no_nontriviality,
    full_report,
    is_associative,
    is_commutative,
    right_identity,
    verify_placement,
)
from .corpus import corpus_all, corpus_by_name, load_table, save_table  # noqa: F401
from .search import (  # noqa: F401
    SearchOutcome,
    SearchSpec,
    derive_nontriviality_separation,
    minimal_size,
    search,
    search_k_combinator,
)
from .iso import find_isomorphisms, transport, verify_capability_invariance, verify_functoriality  # noqa: F401
