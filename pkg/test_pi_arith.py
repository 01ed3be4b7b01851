import pytest

from pi_arith import (FamilyKey, PrimeSet, congruence_in, is_pi_number, pi_part, pi_prime_part,
                      prime_power, prime_support, simple_order, thompson_family_check,
                      thompson_violation)
from utils import InvalidInputError


def test_prime_set_is_sorted_and_validated():
    assert PrimeSet((13, 2, 3)).primes == (2, 3, 13)
    with pytest.raises(InvalidInputError):
        PrimeSet((2, 4))
    with pytest.raises(InvalidInputError):
        PrimeSet((3, 3))
    assert PrimeSet.of([3, 3, 2]) == PrimeSet((2, 3))


def test_prime_set_algebra():
    a, b = PrimeSet((2, 3, 5)), PrimeSet((3, 7))
    assert a & b == PrimeSet((3,))
    assert a | b == PrimeSet((2, 3, 5, 7))
    assert a - b == PrimeSet((2, 5))
    assert PrimeSet((3,)).issubset(a)
    assert not b.issubset(a)
    assert str(a) == "{2,3,5}"
    assert len(PrimeSet()) == 0


def test_pi_parts():
    pi = PrimeSet((2, 3))
    assert prime_support(5616) == PrimeSet((2, 3, 13))
    assert pi_part(5616, pi) == 432
    assert pi_prime_part(5616, pi) == 13
    assert pi_part(1, pi) == 1
    assert is_pi_number(48, pi)
    assert not is_pi_number(60, pi)
    with pytest.raises(InvalidInputError):
        pi_part(0, pi)


def test_prime_power():
    assert prime_power(27) == (3, 3)
    assert prime_power(137) == (137, 1)
    with pytest.raises(InvalidInputError):
        prime_power(12)


def test_congruences_used_by_the_tables():
    assert congruence_in(137, (41,), 48)
    assert congruence_in(103, (7, 31), 72)
    assert congruence_in(7, (-1, 1), 8)
    assert not congruence_in(13, (-1, 1), 8)


@pytest.mark.parametrize("family,q", [
    ("L2_2P", 4), ("L2_2P", 8), ("L2_2P", 32), ("L2_3P", 27), ("L2_PRIME", 7),
    ("L2_PRIME", 13), ("L2_PRIME", 137), ("SZ", 8), ("SZ", 32), ("L3_3", 3),
])
def test_thompson_list_members(family, q):
    assert thompson_family_check(FamilyKey(family, q))


@pytest.mark.parametrize("family,q,fragment", [
    ("L2_2P", 16, "2^p"),
    ("L2_3P", 9, "odd prime"),
    ("L2_PRIME", 11, "mod 5"),
    ("L2_PRIME", 15, "prime greater than 3"),
    ("SZ", 4, "odd prime"),
])
def test_thompson_violations_name_the_condition(family, q, fragment):
    assert fragment in thompson_violation(FamilyKey(family, q))


def test_l3_3_ignores_q():
    assert FamilyKey("L3_3", 99).q == 3
    with pytest.raises(InvalidInputError):
        FamilyKey("L4_2", 2)


@pytest.mark.parametrize("family,q,order", [
    ("L2_2P", 4, 60), ("L2_PRIME", 7, 168), ("L2_2P", 8, 504), ("L2_PRIME", 13, 1092),
    ("L2_PRIME", 17, 2448), ("L2_3P", 27, 9828), ("L3_3", 3, 5616), ("SZ", 8, 29120),
])
def test_simple_orders(family, q, order):
    assert simple_order(FamilyKey(family, q)) == order
