"""Shared fixtures: corpus access and the exhaustive n=4 sweep.

The n=4 sweep is the independent oracle several suites lean on: a
straight nested-loop enumeration of all 65,536 core assignments with
direct checker calls per table, no pruning, no search engine.
"""

import numpy as np
import pytest
from itertools import product

from magmakit import capabilities as caps
from magmakit.corpus import corpus_all


N4_COUNT = 4 ** 8
_R0 = (0, 0, 0, 0)
_R1 = (1, 1, 1, 1)
_CORE4 = (2, 3)


@pytest.fixture(scope="session")
def corpus():
    return {w.name: w for w in corpus_all()}


@pytest.fixture(scope="session")
def n4_sweep():
    """Flags for every complete n=4 core assignment, in base-4 digit order
    (row 2 columns 0-3 are the high digits, then row 3).

    Returns per-family boolean arrays plus, for the families the search
    agreement tests need, the sets of flat entry tuples.
    """
    families = ("E2PM", "D", "H", "R_mutual", "R_onesided", "WeakIcpNoDistinct")
    flags = {f: np.zeros(N4_COUNT, dtype=bool) for f in families}
    flags["strict_and_pair"] = np.zeros(N4_COUNT, dtype=bool)
    flags["associative"] = np.zeros(N4_COUNT, dtype=bool)
    flags["icp_eq_ci"] = np.ones(N4_COUNT, dtype=bool)
    flags["commutative"] = np.zeros(N4_COUNT, dtype=bool)
    flags["pair_33"] = np.zeros(N4_COUNT, dtype=bool)
    sets = {f: set() for f in families}
    t = 0
    for row2 in product(range(4), repeat=4):
        for row3 in product(range(4), repeat=4):
            rows = (_R0, _R1, row2, row3)
            is_e2pm = (len({_R0, _R1, row2, row3}) == 4
                       and row2 != (2, 2, 2, 2) and row3 != (3, 3, 3, 3))
            if not is_e2pm:
                t += 1
                continue
            flat = _R0 + _R1 + row2 + row3
            flags["E2PM"][t] = True
            sets["E2PM"].add(flat)
            pairs = caps.retraction_pairs_raw(rows, 0, 1, _CORE4)
            icp = caps.icp_triples_raw(rows, 0, 1, _CORE4)
            ci = caps.compose_inert_triples_raw(rows, 0, 1, _CORE4)
            flags["icp_eq_ci"][t] = icp == ci
            if caps.has_dichotomy_raw(rows, 0, 1, _CORE4, True):
                flags["D"][t] = True
                sets["D"].add(flat)
            if icp:
                flags["H"][t] = True
                sets["H"].add(flat)
            if any(m and a for _s, _r, m, a in pairs):
                flags["R_mutual"][t] = True
                sets["R_mutual"].add(flat)
            if any(a for _s, _r, _m, a in pairs):
                flags["R_onesided"][t] = True
                sets["R_onesided"].add(flat)
            if any(m and a and (_s, _r) == (3, 3) for _s, _r, m, a in pairs):
                flags["pair_33"][t] = True
            if caps.weak_icp_no_distinctness_raw(rows, 0, 1, _CORE4):
                flags["WeakIcpNoDistinct"][t] = True
                sets["WeakIcpNoDistinct"].add(flat)
            strict = any(all(v in (0, 1) for v in rows[e]) for e in _CORE4)
            onesided = any(a for _s, _r, _m, a in pairs)
            flags["strict_and_pair"][t] = strict and onesided
            flags["associative"][t] = (
                caps.associativity_counterexample_raw(rows, 4) is None)
            flags["commutative"][t] = (
                caps.commutativity_counterexample_raw(rows, 4) is None)
            t += 1
    return {"flags": flags, "sets": sets}
