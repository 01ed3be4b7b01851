"""Arithmetic in GF(p^k) in a polynomial basis.

Elements are encoded as integers 0 .. q-1: the coefficient vector
(c_0, ..., c_{k-1}) of c_0 + c_1 x + ... is stored as sum(c_i * p^i). The
encoding doubles as the canonical point label used by the group constructors.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import List, Tuple

from sympy import isprime, primefactors

from utils import InvalidInputError

FIELD_LIMIT = 2 ** 31


# -----------------------------------------------------------------------------
# Polynomials over GF(p), coefficient lists low degree first
# -----------------------------------------------------------------------------

def _trim(poly: List[int]) -> List[int]:
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _poly_mod(num: List[int], den: List[int], p: int) -> List[int]:
    num = _trim(list(num))
    den = _trim(list(den))
    inv_lead = pow(den[-1], p - 2, p)
    while len(num) >= len(den):
        factor = (num[-1] * inv_lead) % p
        shift = len(num) - len(den)
        for i, c in enumerate(den):
            num[shift + i] = (num[shift + i] - factor * c) % p
        _trim(num)
    return num


def _is_irreducible(poly: Tuple[int, ...], p: int) -> bool:
    k = len(poly) - 1
    if k == 1:
        return True
    if poly[0] == 0:
        return False
    for d in range(1, k // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _poly_mod(list(poly), list(low) + [1], p):
                return False
    return True


def _least_irreducible(p: int, k: int) -> Tuple[int, ...]:
    # Candidates in increasing order of the encoding, i.e. the higher
    # non-leading coefficients are the most significant.
    if k == 1:
        return (0, 1)
    for code in range(p ** k):
        low = [(code // p ** i) % p for i in range(k)]
        poly = tuple(low) + (1,)
        if _is_irreducible(poly, p):
            return poly
    raise InvalidInputError(f"no irreducible polynomial of degree {k} over GF({p})")


# -----------------------------------------------------------------------------
# Field
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    p: int
    k: int
    modulus: Tuple[int, ...]
    _generator: List[int] = field(default_factory=list, compare=False, repr=False)

    @property
    def size(self) -> int:
        return self.p ** self.k

    # --- encoding ---
    def coeffs(self, a: int) -> Tuple[int, ...]:
        return tuple((a // self.p ** i) % self.p for i in range(self.k))

    def encode(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.k:
            coeffs = _poly_mod(coeffs, list(self.modulus), self.p)
        return sum((c % self.p) * self.p ** i for i, c in enumerate(coeffs))

    def element(self, value) -> "FieldElement":
        if isinstance(value, (tuple, list)):
            value = self.encode(value)
        return FieldElement(self, value % self.size if self.k == 1 else value)

    def elements(self) -> range:
        return range(self.size)

    # --- arithmetic on encoded integers ---
    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        ca, cb = self.coeffs(a), self.coeffs(b)
        return self.encode([(x + y) % self.p for x, y in zip(ca, cb)])

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self.encode([(-x) % self.p for x in self.coeffs(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        return _mul_cached(self.p, self.k, self.modulus, a, b)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of zero in a finite field")
        return self.pow(a, self.size - 2)

    def frobenius(self, a: int, e: int = 1) -> int:
        return self.pow(a, self.p ** (e % self.k))

    def suzuki_twist(self, a: int) -> int:
        if self.p != 2 or self.k % 2 == 0 or self.k < 3:
            raise InvalidInputError(f"the Suzuki twist needs GF(2^k) with k odd >= 3, got GF({self.p}^{self.k})")
        return self.pow(a, 2 ** ((self.k + 1) // 2))

    def generator(self) -> int:
        """Least encoded element of multiplicative order q - 1."""
        if not self._generator:
            n = self.size - 1
            prime_factors = primefactors(n)
            for g in range(1, self.size):
                if all(self.pow(g, n // r) != 1 for r in prime_factors):
                    self._generator.append(g)
                    break
        return self._generator[0]

    def __str__(self) -> str:
        return f"GF({self.size})"


@lru_cache(maxsize=1 << 20)
def _mul_cached(p: int, k: int, modulus: Tuple[int, ...], a: int, b: int) -> int:
    ca = [(a // p ** i) % p for i in range(k)]
    cb = [(b // p ** i) % p for i in range(k)]
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(ca):
        if x:
            for j, y in enumerate(cb):
                prod[i + j] = (prod[i + j] + x * y) % p
    rem = _poly_mod(prod, list(modulus), p)
    return sum(c * p ** i for i, c in enumerate(rem))


@lru_cache(maxsize=None)
def make_field(p: int, k: int) -> FieldSpec:
    if not isprime(p):
        raise InvalidInputError(f"field characteristic {p} is not prime")
    if k < 1:
        raise InvalidInputError(f"field degree must be positive, got {k}")
    if p ** k > FIELD_LIMIT:
        raise InvalidInputError(f"field size {p}^{k} exceeds {FIELD_LIMIT}")
    return FieldSpec(p, k, _least_irreducible(p, k))


# -----------------------------------------------------------------------------
# Element wrapper
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    value: int

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self.field.coeffs(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise InvalidInputError("elements of different fields")
            return other.value
        return self.field.element(other).value

    def __add__(self, other): return FieldElement(self.field, self.field.add(self.value, self._other(other)))
    def __sub__(self, other): return FieldElement(self.field, self.field.sub(self.value, self._other(other)))
    def __mul__(self, other): return FieldElement(self.field, self.field.mul(self.value, self._other(other)))
    def __neg__(self): return FieldElement(self.field, self.field.neg(self.value))
    def __pow__(self, e: int): return FieldElement(self.field, self.field.pow(self.value, e))
    def __truediv__(self, other): return FieldElement(self.field, self.field.mul(self.value, self.field.inv(self._other(other))))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def frobenius(self, e: int = 1) -> "FieldElement":
        return FieldElement(self.field, self.field.frobenius(self.value, e))

    def twist(self) -> "FieldElement":
        return FieldElement(self.field, self.field.suzuki_twist(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self) -> str:
        return "+".join(f"{c}x^{i}" for i, c in enumerate(self.coeffs) if c) or "0"
