import pytest

from magmakit.core import (
    AbsorberMissing,
    CayleyTable,
    Decomposition,
    DichotomyViolation,
    DomainError,
    EmptyCoreError,
    ExtensionalityViolation,
    ExtraAbsorber,
    NotPermutation,
    SameAbsorbers,
    core_elements,
    decompose,
    normalize,
    relabel,
    validate_e2pm,
)


def table(*rows):
    return CayleyTable.from_rows(rows)


def test_table_shape_checks():
    with pytest.raises(DomainError):
        CayleyTable(2, (0, 1, 0))
    with pytest.raises(DomainError):
        CayleyTable(2, (0, 1, 2, 0))
    with pytest.raises(DomainError):
        CayleyTable(0, ())
    t = table((0, 1), (1, 0))
    assert t.value(0, 1) == 1
    assert t.rows == ((0, 1), (1, 0))


def test_validate_kripke4(corpus):
    m = corpus["kripke4"].table
    assert (m.z1, m.z2) == (0, 1)
    assert core_elements(m) == (2, 3)


def test_validate_empty_core():
    m = validate_e2pm(table((0, 0), (1, 1)), 0, 1)
    assert core_elements(m) == ()


def test_validate_error_order():
    with pytest.raises(SameAbsorbers):
        validate_e2pm(table((0, 0), (1, 1)), 0, 0)
    with pytest.raises(AbsorberMissing) as exc:
        validate_e2pm(table((0, 1), (1, 1)), 0, 1)
    assert exc.value.z == 0
    with pytest.raises(ExtraAbsorber) as exc:
        validate_e2pm(table((0, 0, 0), (1, 1, 1), (2, 2, 2)), 0, 1)
    assert exc.value.e == 2
    # duplicated rows report the first clashing pair
    with pytest.raises(ExtensionalityViolation) as exc:
        validate_e2pm(table((0, 0, 0), (1, 1, 1), (0, 0, 0)), 0, 1)
    assert (exc.value.a, exc.value.b) == (0, 2)


def test_absorbers_out_of_range():
    with pytest.raises(DomainError):
        validate_e2pm(table((0, 0), (1, 1)), 0, 5)


def test_exactly_two_constant_rows(corpus):
    for w in corpus.values():
        m = w.table
        constant_self = [e for e in range(m.n)
                         if all(v == e for v in m.rows[e])]
        assert constant_self == [0, 1]
        assert len(set(m.rows)) == m.n


def test_core_elements_examples(corpus):
    assert core_elements(corpus["kripke4"].table) == (2, 3)
    assert core_elements(corpus["witness10"].table) == tuple(range(2, 10))


def test_decompose_kripke4(corpus):
    dec = decompose(corpus["kripke4"].table)
    assert isinstance(dec, Decomposition)
    assert dec.zeros == {0, 1}
    assert dec.classifiers == {2}
    assert dec.nonclassifiers == {3}


def test_decompose_witness5(corpus):
    dec = decompose(corpus["witness5"].table)
    assert dec.classifiers == {3, 4}
    assert dec.nonclassifiers == {2}


def test_decompose_countermodel8(corpus):
    dec = decompose(corpus["countermodel8"].table)
    assert isinstance(dec, DichotomyViolation)
    assert dec.element == 5
    m = corpus["countermodel8"].table
    assert m.value(dec.element, dec.absorber_input) in (0, 1)
    assert m.value(dec.element, dec.nonabsorber_input) not in (0, 1)


def test_decompose_empty_core():
    m = validate_e2pm(table((0, 0), (1, 1)), 0, 1)
    with pytest.raises(EmptyCoreError):
        decompose(m)


def test_decompose_partitions(corpus):
    for w in corpus.values():
        dec = decompose(w.table)
        if isinstance(dec, Decomposition):
            union = dec.zeros | dec.classifiers | dec.nonclassifiers
            assert union == set(range(w.table.n))
            assert not (dec.classifiers & dec.nonclassifiers)
            assert not (dec.zeros & dec.classifiers)


def test_normalize_identity_on_corpus(corpus):
    for w in corpus.values():
        assert normalize(w.table) is w.table


def test_normalize_restores_swapped_absorbers(corpus):
    k4 = corpus["kripke4"].table
    # relabel by the absorber swap, independently of normalize's own helper
    swap = (1, 0, 2, 3)
    relabeled = validate_e2pm(relabel(k4.table, swap), 1, 0)
    restored = normalize(relabeled)
    assert restored.table == k4.table
    assert (restored.z1, restored.z2) == (0, 1)


def test_normalize_moves_absorbers_anywhere(corpus):
    k5 = corpus["kripke5"].table
    perm = (3, 0, 2, 1, 4)  # z1 -> 3, z2 -> 0
    relabeled = validate_e2pm(relabel(k5.table, perm), 3, 0)
    restored = normalize(relabeled)
    assert (restored.z1, restored.z2) == (0, 1)
    assert normalize(restored) is restored  # idempotent


def test_relabel_rejects_non_permutation(corpus):
    with pytest.raises(NotPermutation):
        relabel(corpus["kripke4"].table.table, (0, 1, 2, 2))
