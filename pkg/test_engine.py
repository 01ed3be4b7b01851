from dataclasses import replace

import pytest

import engine
from engine import (FULL, INCONCLUSIVE, MATCH, MISMATCH, TARGETED, dpi_check, find_sym4_over,
                    reports_frame, submaximal_classes, sylow_smoke, verify_aut_exceptions,
                    verify_case, verify_fitting_reduction, verify_maximal_tables)
from groups import LineSubgroups, aut_embedding, psl2, sl2_5
from oracle import CaseKey, classify, dpi_predict
from permgroup import Subgroup, fitting_subgroup, pi_maximal_classes
from pi_arith import FamilyKey, PrimeSet
from structid import dihedral, named
from utils import Settings, get_settings, set_settings

L2_7 = FamilyKey("L2_PRIME", 7)


@pytest.fixture(scope="module")
def emb7():
    return aut_embedding(L2_7)


def test_submaximal_classes_of_l2_7(emb7):
    classes = submaximal_classes(emb7, PrimeSet((2, 3)))
    by_shape = {}
    for c in classes:
        by_shape.setdefault(str(c.descriptor), []).append(c)
    assert sorted(by_shape) == ["DIHEDRAL(6)", "DIHEDRAL(8)", "SYM4"]
    assert len(by_shape["SYM4"]) == 2
    s4a, s4b = by_shape["SYM4"]
    assert s4a.orbit == s4b.orbit
    assert not s4a.intravariant
    for name in ("DIHEDRAL(6)", "DIHEDRAL(8)"):
        (c,) = by_shape[name]
        assert not c.pi_maximal_in_socle
        assert c.container == named("SYM4")
    assert all(c.pronormal for c in classes)
    assert all(c.wh_index == 1 for c in classes)


@pytest.mark.parametrize("primes", [(), (2,), (3,), (7,), (2, 3), (2, 7), (3, 7), (2, 3, 7), (5,)])
def test_full_tier_matches_on_l2_7(primes):
    report = verify_case(CaseKey(L2_7, PrimeSet(primes)), FULL)
    assert report.verdict == MATCH, report.details


@pytest.mark.parametrize("primes", [(2, 3), (2, 5), (3, 5)])
def test_full_tier_matches_on_l2_4(primes):
    report = verify_case(CaseKey(FamilyKey("L2_2P", 4), PrimeSet(primes)), FULL)
    assert report.verdict == MATCH, report.details


def test_targeted_tier_on_l2_7():
    report = verify_case(CaseKey(L2_7, PrimeSet((2, 3))), TARGETED)
    assert report.verdict == MATCH, report.details
    assert [c.pi_maximal_in_socle for c in report.classes] == [False, False, True]
    assert all(c.pronormal is None for c in report.classes)


def test_targeted_tier_falls_back_for_l3_3():
    report = verify_case(CaseKey(FamilyKey("L3_3", 3), PrimeSet((2, 13))), TARGETED)
    assert report.tier == FULL
    assert any("no targeted recipe" in d for d in report.details)
    assert report.verdict == MATCH, report.details


def test_exhausted_budget_is_inconclusive():
    saved = get_settings()
    set_settings(Settings(budget_steps=5))
    try:
        report = verify_case(CaseKey(L2_7, PrimeSet((2, 3))), TARGETED)
    finally:
        set_settings(saved)
    assert report.verdict == INCONCLUSIVE


def test_sym4_search_finds_the_container_of_d8():
    G = psl2(7)
    d8 = Subgroup(G, LineSubgroups(7).torus(-1, 4, with_involution=True))
    J = find_sym4_over(G, d8)
    assert J is not None and J.order == 24
    assert all(J.contains(g) for g in d8.generators)


def test_targeted_tier_rejects_a_maximal_row_inside_an_s4(monkeypatch):
    def without_d8_container(case):
        result = classify(case)
        records = tuple(
            replace(r, pi_maximal=True, container=None, container_note="")
            if r.descriptor == dihedral(8) else r
            for r in result.records)
        return replace(result, records=records)

    monkeypatch.setattr(engine, "classify", without_d8_container)
    report = verify_case(CaseKey(L2_7, PrimeSet((2, 3))), TARGETED)
    assert report.verdict == MISMATCH
    assert any("an S4 over H exists" in d for d in report.details)


@pytest.mark.slow
def test_targeted_tier_confirms_a_maximal_d6():
    # 43 = 3 mod 8, so L2(43) has no S4 and its D6 is pi-maximal
    report = verify_case(CaseKey(FamilyKey("L2_PRIME", 43), PrimeSet((2, 3))), TARGETED)
    assert report.verdict == MATCH, report.details
    d6 = next(c for c in report.classes if c.descriptor == dihedral(6))
    assert d6.pi_maximal_in_socle
    assert any("no S4 over H" in d for d in report.details)


TIER1_GROUPS = [
    ("L2_2P", 4), ("L2_PRIME", 7), ("L2_2P", 8), ("L2_PRIME", 13),
    ("L2_PRIME", 17), ("L2_3P", 27), ("L3_3", 3), ("SZ", 8),
]


@pytest.mark.parametrize("family,q", TIER1_GROUPS)
def test_maximal_tables(family, q):
    report = verify_maximal_tables(FamilyKey(family, q))
    assert report.verdict == MATCH, report.details


def test_aut_exceptions_of_l2_7():
    report = verify_aut_exceptions(L2_7)
    assert report.verdict == MATCH, report.details


SUBSETS_235 = [(), (2,), (3,), (5,), (2, 3), (2, 5), (3, 5), (2, 3, 5)]


@pytest.mark.parametrize("primes", SUBSETS_235)
def test_fitting_reduction_on_sl2_5(primes):
    report = verify_fitting_reduction(sl2_5(), PrimeSet(primes))
    assert report.verdict == MATCH, report.details


@pytest.mark.parametrize("primes", SUBSETS_235)
def test_pi_maximal_subgroups_meet_the_centre_of_sl2_5(primes):
    # F(SL2(5)) is the centre of order 2
    G = sl2_5().whole()
    N = fitting_subgroup(G)
    expected = 2 if 2 in primes else 1
    for c in pi_maximal_classes(G, PrimeSet(primes)):
        assert len(c.representative.intersection(N)) == expected


def test_single_prime_smoke(emb7):
    for p in (2, 3, 7):
        assert sylow_smoke(emb7, p)


@pytest.mark.parametrize("primes", [(3, 7), (2, 3), (2, 7)])
def test_dpi_check_agrees_with_prediction(emb7, primes):
    pi = PrimeSet(primes)
    assert dpi_check(emb7, pi) == dpi_predict(CaseKey(L2_7, pi))


@pytest.mark.slow
@pytest.mark.parametrize("primes", [(3,), (3, 7), (3, 13), (3, 7, 13), (7, 13), (2, 3)])
def test_dpi_check_on_l2_27(primes):
    key = FamilyKey("L2_3P", 27)
    pi = PrimeSet(primes)
    assert dpi_check(aut_embedding(key), pi) == dpi_predict(CaseKey(key, pi))


def test_reports_frame():
    reports = [verify_case(CaseKey(L2_7, PrimeSet((3, 7))), FULL)]
    frame = reports_frame(reports)
    assert list(frame["verdict"]) == [MATCH]
    assert frame.loc[0, "family"] == "L2_PRIME"
    assert frame.loc[0, "records"] == 1
    assert "seconds" not in reports[0].to_dict()


@pytest.mark.slow
@pytest.mark.parametrize("family,q,primes", [
    ("L3_3", 3, (2, 3)),
    ("L3_3", 3, (3, 13)),
    ("L2_PRIME", 13, (2, 3)),
    ("L2_PRIME", 17, (2, 3)),
    ("L2_3P", 27, (2, 3)),
    ("SZ", 8, (2, 5)),
    ("SZ", 8, (2, 7)),
])
def test_full_tier_on_larger_groups(family, q, primes):
    report = verify_case(CaseKey(FamilyKey(family, q), PrimeSet(primes)), FULL)
    assert report.verdict == MATCH, report.details


@pytest.mark.slow
@pytest.mark.parametrize("q", [137, 103])
def test_targeted_tier_finds_the_s4_containers(q):
    report = verify_case(CaseKey(FamilyKey("L2_PRIME", q), PrimeSet((2, 3))), TARGETED)
    assert report.verdict == MATCH, report.details
    assert sum(1 for c in report.classes if c.container == named("SYM4")) == 2


@pytest.mark.slow
def test_aut_exceptions_of_l3_3():
    report = verify_aut_exceptions(FamilyKey("L3_3", 3))
    assert report.verdict == MATCH, report.details
