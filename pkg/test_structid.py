import pytest

from groups import LineSubgroups, psl2
from permgroup import Subgroup, sylow_subgroup
from structid import (StructureDescriptor, cm_c4, cyclic, dihedral, elem_abelian, expected_order,
                      frob_cq_cm, frob_eq_cm, identify, is_isomorphic, matches, model, named,
                      normalize, semidihedral, sz_borel, trivial, unrecognized, whole)
from utils import InvalidInputError

CORPUS_DESCRIPTORS = [
    trivial(), cyclic(2), cyclic(7), cyclic(9), cyclic(13), dihedral(6), dihedral(8), dihedral(14),
    dihedral(18), semidihedral(16), elem_abelian(2, 2), elem_abelian(2, 3), elem_abelian(3, 3),
    frob_cq_cm(7, 3), frob_eq_cm(8, 7), frob_cq_cm(13, 6), frob_eq_cm(27, 13), cm_c4(5),
    cm_c4(13), named("ALT4"), named("SYM4"), named("GL2_3"), named("EXTRASPECIAL_27"),
    named("ES27_BY_V4"), named("E9_GL23"), named("C13_C3"), sz_borel(8, 1), sz_borel(8, 7),
]


@pytest.mark.parametrize("d", CORPUS_DESCRIPTORS, ids=str)
def test_identify_recovers_the_model(d):
    M = model(d)
    assert len(M) == expected_order(d)
    assert identify(M) == normalize(d)


@pytest.mark.parametrize("raw,canonical", [
    (cyclic(1), trivial()),
    (dihedral(2), cyclic(2)),
    (dihedral(4), elem_abelian(2, 2)),
    (elem_abelian(5, 1), cyclic(5)),
    (frob_eq_cm(8, 1), elem_abelian(2, 3)),
    (frob_eq_cm(4, 3), named("ALT4")),
    (frob_eq_cm(7, 3), frob_cq_cm(7, 3)),
    (frob_cq_cm(7, 2), dihedral(14)),
    (frob_cq_cm(13, 4), cm_c4(13)),
    (frob_cq_cm(13, 3), named("C13_C3")),
    (cm_c4(1), cyclic(4)),
])
def test_normalization(raw, canonical):
    assert normalize(raw) == canonical


def test_expected_orders():
    assert expected_order(sz_borel(8, 7)) == 448
    assert expected_order(cm_c4(13)) == 52
    assert expected_order(named("E9_GL23")) == 432
    assert expected_order(whole(5616)) == 5616
    with pytest.raises(InvalidInputError):
        expected_order(unrecognized(10, ()))


def test_descriptor_serialisation():
    assert frob_cq_cm(7, 3).to_dict() == {"kind": "FROB_CQ_CM", "params": [7, 3]}
    assert named("SYM4").to_dict() == {"kind": "SYM4", "params": []}
    assert "fingerprint" in unrecognized(10, (10,)).to_dict()
    assert not unrecognized(10, (10,)).recognized
    with pytest.raises(InvalidInputError):
        StructureDescriptor("NOT_A_KIND")


def test_subgroups_of_psl2_7():
    G = psl2(7)
    assert identify(sylow_subgroup(G, 2)) == dihedral(8)
    assert identify(sylow_subgroup(G, 7)) == cyclic(7)
    assert matches(sylow_subgroup(G, 3), cyclic(3))


def test_isomorphism_separates_same_order_groups():
    c8, d8, e8 = model(cyclic(8)), model(dihedral(8)), model(elem_abelian(2, 3))
    assert not is_isomorphic(c8, d8)
    assert not is_isomorphic(e8, d8)
    assert is_isomorphic(d8, model(dihedral(8)))
    a4_in_l2_7 = Subgroup(psl2(7), LineSubgroups(7).alt4())
    assert is_isomorphic(a4_in_l2_7, model(named("ALT4")))


def test_identify_has_an_order_limit():
    with pytest.raises(InvalidInputError):
        identify(psl2(13).whole())
