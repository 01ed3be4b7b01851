import numpy as np
import pytest

from groups import psl2, sl2_5
from permgroup import (PermGroup, QuotientMap, StepBudget, are_conjugate, center,
                       centralizer_by_orbit, conjugate_into, conjugates, derived_subgroup,
                       element_order_histogram, fitting_subgroup, frattini_subgroup, inverse,
                       is_abelian, is_normal, is_pronormal, maximal_subgroup_classes, mul,
                       normalizer, normalizer_by_orbit, orbit_lengths, perm_order,
                       pi_maximal_classes, pi_subgroup_classes, sylow_subgroup)
from pi_arith import PrimeSet
from utils import BudgetExceededError, CapExceededError, InvalidInputError, Settings, get_settings, set_settings

TRANSPOSITION = (1, 0, 2, 3)
FOUR_CYCLE = (1, 2, 3, 0)
THREE_CYCLE = (1, 2, 0, 3)
DOUBLE = (1, 0, 3, 2)


@pytest.fixture(scope="module")
def s4():
    return PermGroup(4, [TRANSPOSITION, FOUR_CYCLE], name="S4")


@pytest.fixture(scope="module")
def a4():
    return PermGroup(4, [THREE_CYCLE, DOUBLE], name="A4")


@pytest.fixture(scope="module")
def a5():
    return psl2(4)


def test_composition_runs_left_to_right():
    a, b = (1, 2, 0), (1, 0, 2)
    assert mul(a, b) == tuple(b[a[i]] for i in range(3))
    assert mul(a, inverse(a)) == (0, 1, 2)
    assert perm_order(FOUR_CYCLE) == 4


def test_orders_and_membership(s4, a4):
    assert s4.order == 24
    assert len(s4.whole()) == 24
    assert a4.order == 12
    assert s4.contains(DOUBLE)
    assert not a4.contains(TRANSPOSITION)
    with pytest.raises(InvalidInputError):
        a4.subgroup([TRANSPOSITION])


def test_subgroup_structure(s4):
    S = s4.whole()
    V = s4.subgroup([DOUBLE, (2, 3, 0, 1)])
    assert len(V) == 4
    assert is_abelian(V)
    assert is_normal(S, V)
    assert len(derived_subgroup(S)) == 12
    assert len(center(S)) == 1
    assert element_order_histogram(S) == {1: 1, 2: 9, 3: 8, 4: 6}
    assert sorted(orbit_lengths(s4.subgroup([TRANSPOSITION]))) == [1, 1, 2]


def test_normalizers_and_conjugacy(s4):
    S = s4.whole()
    T = s4.subgroup([TRANSPOSITION])
    assert len(normalizer(S, T)) == 4
    assert len(conjugates(S, T)) == 6
    assert are_conjugate(S, T, s4.subgroup([(0, 1, 3, 2)])) is not None
    assert are_conjugate(S, T, s4.subgroup([DOUBLE])) is None
    g = conjugate_into(S, T, s4.subgroup([(0, 2, 1, 3), (0, 1, 3, 2)]))
    assert g is not None


def test_orbit_searches_agree_with_scans(s4):
    T = s4.subgroup([TRANSPOSITION])
    assert normalizer_by_orbit(s4, T).order == 4
    assert centralizer_by_orbit(s4, TRANSPOSITION).order == 4
    with pytest.raises(BudgetExceededError):
        normalizer_by_orbit(s4, T, StepBudget(limit=2))


def test_pronormality(s4, a4):
    assert is_pronormal(s4.whole(), sylow_subgroup(s4.whole(), 2))
    # a C2 of A4 and its conjugates generate an abelian V4
    assert not is_pronormal(a4.whole(), a4.subgroup([DOUBLE]))


def test_sylow_subgroups(a5):
    assert sylow_subgroup(a5, 2).order == 4
    assert sylow_subgroup(a5, 5).order == 5
    assert sylow_subgroup(a5, 7).order == 1
    assert sylow_subgroup(psl2(7), 2).order == 8


def test_pi_subgroup_classes_of_s4(s4):
    classes = pi_subgroup_classes(s4, PrimeSet((2,)))
    # 1, C2 (two classes), C4, V4 (two classes), D8
    assert sorted(c.order for c in classes) == [1, 2, 2, 4, 4, 4, 8]
    assert sum(c.class_size for c in classes if c.order == 2) == 9


def test_pi_maximal_classes(s4, a5):
    assert [c.order for c in pi_maximal_classes(s4, PrimeSet((2,)))] == [8]
    assert [c.order for c in pi_maximal_classes(s4, PrimeSet((2, 3)))] == [24]
    assert [c.order for c in pi_maximal_classes(a5, PrimeSet((2, 3)))] == [6, 12]
    assert [c.order for c in pi_maximal_classes(a5, PrimeSet((3, 5)))] == [3, 5]


def test_threaded_enumeration_is_deterministic(a5):
    serial = pi_subgroup_classes(a5, PrimeSet((2, 5)))
    threaded = pi_subgroup_classes(a5, PrimeSet((2, 5)), workers=4)
    assert [c.representative.fingerprint() for c in serial] == \
        [c.representative.fingerprint() for c in threaded]


def test_maximal_subgroups(s4, a5):
    assert sorted(c.order for c in maximal_subgroup_classes(s4)) == [6, 8, 12]
    assert sorted(c.order for c in maximal_subgroup_classes(a5)) == [6, 10, 12]


def test_fitting_frattini_and_quotient(s4):
    S = s4.whole()
    F = fitting_subgroup(S)
    assert len(F) == 4
    assert len(frattini_subgroup(S)) == 1
    quotient = QuotientMap(S, F)
    assert quotient.group.order == 6
    image = quotient.image(s4.subgroup([FOUR_CYCLE]))
    assert image.order == 2
    assert len(quotient.preimage(image)) == 8


def test_quotient_needs_a_normal_subgroup(s4):
    with pytest.raises(InvalidInputError):
        QuotientMap(s4.whole(), s4.subgroup([TRANSPOSITION]))


def test_materialisation_cap():
    saved = get_settings()
    set_settings(Settings(cap_elements=10))
    try:
        with pytest.raises(CapExceededError):
            PermGroup(4, [TRANSPOSITION, FOUR_CYCLE]).whole()
    finally:
        set_settings(saved)


def test_subgroup_keys_are_sorted_and_unique(a5):
    H = sylow_subgroup(a5, 2)
    keys = H.keys
    assert len(np.unique(keys)) == len(keys) == 4


def test_frattini_equals_fitting_in_sl2_5():
    G = sl2_5().whole()
    F = fitting_subgroup(G)
    assert len(F) == 2
    assert frattini_subgroup(G).signature == F.signature
