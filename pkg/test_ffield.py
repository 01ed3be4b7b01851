import pytest

from ffield import make_field
from utils import InvalidInputError


@pytest.fixture(scope="module", params=[(2, 3), (3, 2), (3, 3), (2, 5), (7, 1)])
def field(request):
    return make_field(*request.param)


def test_gf8_modulus_and_product():
    F = make_field(2, 3)
    # x^3 + x + 1
    assert F.modulus == (1, 1, 0, 1)
    # x * x^2 = x + 1
    assert F.mul(2, 4) == 3


def test_every_nonzero_element_has_an_inverse(field):
    for a in range(1, field.size):
        assert field.mul(a, field.inv(a)) == 1


def test_generator_is_primitive(field):
    g = field.generator()
    powers = {field.pow(g, e) for e in range(field.size - 1)}
    assert len(powers) == field.size - 1
    assert 0 not in powers


def test_additive_group(field):
    for a in range(field.size):
        assert field.add(a, field.neg(a)) == 0
        assert field.sub(a, a) == 0


def test_frobenius_is_a_field_automorphism(field):
    for a in range(field.size):
        for b in range(0, field.size, 3):
            assert field.frobenius(field.mul(a, b)) == field.mul(field.frobenius(a), field.frobenius(b))
            assert field.frobenius(field.add(a, b)) == field.add(field.frobenius(a), field.frobenius(b))


def test_negative_powers(field):
    g = field.generator()
    assert field.mul(field.pow(g, -3), field.pow(g, 3)) == 1


def test_suzuki_twist_squares_to_frobenius():
    F = make_field(2, 3)
    for a in range(F.size):
        assert F.suzuki_twist(F.suzuki_twist(a)) == F.frobenius(a)
    with pytest.raises(InvalidInputError):
        make_field(2, 4).suzuki_twist(1)


def test_field_elements_wrap_the_arithmetic():
    F = make_field(3, 2)
    a, b = F.element(4), F.element((1, 2))
    assert (a * b).value == F.mul(4, b.value)
    assert (a / a).value == 1
    assert (a - a).is_zero()


def test_invalid_fields():
    with pytest.raises(InvalidInputError):
        make_field(4, 1)
    with pytest.raises(InvalidInputError):
        make_field(2, 0)
    with pytest.raises(ZeroDivisionError):
        make_field(5, 1).inv(0)
