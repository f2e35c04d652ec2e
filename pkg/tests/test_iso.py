import random

import pytest
from hypothesis import given, settings, strategies as st

from magmakit.capabilities import full_report
from magmakit.core import (
    Decomposition,
    NotPermutation,
    PreconditionUnmet,
    decompose,
    relabel,
    validate_e2pm,
)
from magmakit.iso import (
    AbsorberNotFixed,
    SizeMismatch,
    absorber_fixing_permutations,
    find_isomorphisms,
    reports_correspond,
    sample_absorber_fixing_permutation,
    transport,
    verify_capability_invariance,
    verify_functoriality,
)
from magmakit.search import random_e2pm


def compose(p, q):
    """(p after q) as image sequences."""
    return tuple(p[q[i]] for i in range(len(p)))


def inverse(p):
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def core_perms(corpus_table):
    return list(absorber_fixing_permutations(corpus_table))


# ----------------------------------------------------------------------------
# Transport
# ----------------------------------------------------------------------------

def test_transport_identity(corpus):
    k4 = corpus["kripke4"].table
    assert transport(k4, (0, 1, 2, 3)).table == k4.table


def test_transport_swap_core(corpus):
    k4 = corpus["kripke4"].table
    t = transport(k4, (0, 1, 3, 2))
    dec = decompose(t)
    assert dec.classifiers == {3} and dec.nonclassifiers == {2}
    # cell-wise definition check
    for a in range(4):
        for b in range(4):
            p = (0, 1, 3, 2)
            assert t.value(p[a], p[b]) == p[k4.value(a, b)]


def test_transport_inverse_round_trip(corpus):
    rng = random.Random(9)
    for w in corpus.values():
        p = sample_absorber_fixing_permutation(w.table, rng)
        t = transport(w.table, p)
        assert transport(t, inverse(p)).table == w.table.table


def test_transport_rejects_bad_perms(corpus):
    k4 = corpus["kripke4"].table
    with pytest.raises(NotPermutation):
        transport(k4, (0, 1, 2, 2))
    with pytest.raises(AbsorberNotFixed):
        transport(k4, (1, 0, 2, 3))


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 6), st.integers(0, 2 ** 32 - 1),
       st.integers(0, 2 ** 32 - 1), st.integers(0, 2 ** 32 - 1))
def test_transport_group_action(n, seed, pseed, qseed):
    m = random_e2pm(n, random.Random(seed))
    p = sample_absorber_fixing_permutation(m, random.Random(pseed))
    q = sample_absorber_fixing_permutation(m, random.Random(qseed))
    left = transport(m, compose(p, q))
    right = transport(transport(m, q), p)
    assert left.table == right.table


# ----------------------------------------------------------------------------
# Isomorphism enumeration
# ----------------------------------------------------------------------------

def test_find_isomorphisms_contains_identity(corpus):
    k4 = corpus["kripke4"].table
    isos = find_isomorphisms(k4, k4)
    assert (0, 1, 2, 3) in [w.perm for w in isos]
    assert all(w.fixes_absorbers for w in isos)


def test_find_isomorphisms_by_construction(corpus):
    k4 = corpus["kripke4"].table
    p = (0, 1, 3, 2)
    t = transport(k4, p)
    assert p in [w.perm for w in find_isomorphisms(k4, t)]


def test_no_isomorphism_across_capabilities(corpus):
    # kripke4 has a retraction pair, dNotS4 does not; preserved quantities
    # rule every candidate out, and direct enumeration agrees
    isos = find_isomorphisms(corpus["kripke4"].table, corpus["dNotS4"].table)
    assert isos == []


def test_size_mismatch(corpus):
    with pytest.raises(SizeMismatch):
        find_isomorphisms(corpus["kripke4"].table, corpus["witness5"].table)


def test_absorber_fixing_permutation_count(corpus):
    assert len(core_perms(corpus["kripke4"].table)) == 2
    assert len(core_perms(corpus["witness5"].table)) == 6
    assert len(core_perms(corpus["witness6"].table)) == 24


# ----------------------------------------------------------------------------
# Functoriality and capability invariance
# ----------------------------------------------------------------------------

def test_functoriality_on_kripke5_automorphisms(corpus):
    k5 = corpus["kripke5"].table
    autos = [w.perm for w in find_isomorphisms(k5, k5)]
    assert autos  # identity at least
    for p in autos:
        assert verify_functoriality(k5, p)


def test_functoriality_identity(corpus):
    w6 = corpus["witness6"].table
    assert verify_functoriality(w6, tuple(range(6)))


def test_functoriality_witness5_class_stability(corpus):
    w5 = corpus["witness5"].table
    for auto in find_isomorphisms(w5, w5):
        t = transport(w5, auto.perm)
        dec = decompose(t)
        assert isinstance(dec, Decomposition)
        assert dec.classifiers == {3, 4}


def test_functoriality_precondition(corpus):
    with pytest.raises(PreconditionUnmet):
        verify_functoriality(corpus["countermodel8"].table, tuple(range(8)))


def test_invariance_witness5_identity(corpus):
    assert verify_capability_invariance(corpus["witness5"].table, (0, 1, 2, 3, 4))


def test_invariance_witness6_automorphisms(corpus):
    w6 = corpus["witness6"].table
    for auto in find_isomorphisms(w6, w6):
        assert verify_capability_invariance(w6, auto.perm)
        t = transport(w6, auto.perm)
        pairs = [(p.s, p.r) for p in full_report(t).r_mutual]
        assert (auto.perm[2], auto.perm[3]) in pairs


def test_invariance_countermodel8_automorphisms(corpus):
    c8 = corpus["countermodel8"].table
    for auto in find_isomorphisms(c8, c8):
        assert verify_capability_invariance(c8, auto.perm)
        rep = full_report(transport(c8, auto.perm))
        assert rep.has_r and not rep.has_d


def test_invariance_all_core_perms_small(corpus):
    for name in ("kripke4", "witness5", "hNotD5"):
        m = corpus[name].table
        for p in absorber_fixing_permutations(m):
            assert verify_capability_invariance(m, p)


def test_reports_correspond_is_strict(corpus):
    a = full_report(corpus["kripke4"].table)
    b = full_report(corpus["dNotS4"].table)
    assert not reports_correspond(a, b, (0, 1, 2, 3))


def test_normalization_preserves_reports():
    # random relabel moving the absorbers, normalize back, transport reports
    rng = random.Random(31)
    for n in (4, 5, 6):
        m = random_e2pm(n, rng)
        q = list(range(n))
        rng.shuffle(q)
        q = tuple(q)
        relabeled = validate_e2pm(relabel(m.table, q), q[0], q[1])
        from magmakit.core import normalize, _normalizing_perm
        nm = normalize(relabeled)
        total = compose(_normalizing_perm(n, relabeled.z1, relabeled.z2), q)
        assert reports_correspond(full_report(m), full_report(nm), total)
