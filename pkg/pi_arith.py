"""Integer arithmetic over prime sets: π-parts, supports, congruences and the
Thompson-list family check."""
from dataclasses import dataclass
from typing import Iterable, Tuple

from sympy import factorint, isprime

from utils import InvalidInputError

Q_LIMIT = 2 ** 31 - 1

FAMILIES = ("L2_2P", "L2_3P", "L2_PRIME", "SZ", "L3_3")


@dataclass(frozen=True)
class PrimeSet:
    primes: Tuple[int, ...] = ()

    def __post_init__(self):
        primes = tuple(self.primes)
        if any(not isprime(p) for p in primes):
            raise InvalidInputError(f"not a prime set: {primes}")
        if len(set(primes)) != len(primes):
            raise InvalidInputError(f"duplicate primes in {primes}")
        object.__setattr__(self, "primes", tuple(sorted(primes)))

    @classmethod
    def of(cls, primes: Iterable[int]) -> "PrimeSet":
        return cls(tuple(sorted(set(primes))))

    def __contains__(self, p: int) -> bool:
        return p in self.primes

    def __iter__(self):
        return iter(self.primes)

    def __len__(self) -> int:
        return len(self.primes)

    def __and__(self, other: "PrimeSet") -> "PrimeSet":
        return PrimeSet(tuple(p for p in self.primes if p in other))

    def __or__(self, other: "PrimeSet") -> "PrimeSet":
        return PrimeSet.of(self.primes + other.primes)

    def __sub__(self, other: "PrimeSet") -> "PrimeSet":
        return PrimeSet(tuple(p for p in self.primes if p not in other))

    def issubset(self, other: "PrimeSet") -> bool:
        return all(p in other for p in self.primes)

    def __str__(self) -> str:
        return "{" + ",".join(str(p) for p in self.primes) + "}"


@dataclass(frozen=True)
class FamilyKey:
    family: str
    q: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidInputError(f"unknown family {self.family!r}")
        if self.family == "L3_3":
            object.__setattr__(self, "q", 3)

    def __str__(self) -> str:
        return "L3(3)" if self.family == "L3_3" else f"{self.family}({self.q})"


def _check_positive(n: int) -> None:
    if n <= 0:
        raise InvalidInputError(f"expected a positive integer, got {n}")


def prime_support(n: int) -> PrimeSet:
    _check_positive(n)
    return PrimeSet(tuple(factorint(n)))


def pi_part(n: int, pi: PrimeSet) -> int:
    _check_positive(n)
    result = 1
    for p, e in factorint(n).items():
        if p in pi:
            result *= p ** e
    return result


def pi_prime_part(n: int, pi: PrimeSet) -> int:
    return n // pi_part(n, pi)


def is_pi_number(n: int, pi: PrimeSet) -> bool:
    return prime_support(n).issubset(pi)


def congruence_in(q: int, residues: Iterable[int], modulus: int) -> bool:
    if modulus < 2:
        raise InvalidInputError(f"modulus must be at least 2, got {modulus}")
    return q % modulus in {r % modulus for r in residues}


def prime_power(q: int) -> Tuple[int, int]:
    """(p, k) with q = p^k, or InvalidInputError."""
    if q < 2:
        raise InvalidInputError(f"{q} is not a prime power")
    factors = factorint(q)
    if len(factors) != 1:
        raise InvalidInputError(f"{q} is not a prime power")
    (p, k), = factors.items()
    return p, k


def _exponent_of(q: int, base: int) -> int:
    k = 0
    while q > 1 and q % base == 0:
        q //= base
        k += 1
    return k if q == 1 else 0


def thompson_violation(key: FamilyKey) -> str:
    """Empty string when the key is on the Thompson list, otherwise the violated condition."""
    q = key.q
    if key.family == "L3_3":
        return ""
    if q < 2 or q > Q_LIMIT:
        return f"q must lie in [2, {Q_LIMIT}]"
    if key.family in ("L2_2P", "SZ"):
        e = _exponent_of(q, 2)
        if not isprime(e):
            return f"q = {q} must be 2^p with p prime"
        if key.family == "SZ" and e == 2:
            return f"q = {q} must be 2^p with p an odd prime"
        return ""
    if key.family == "L2_3P":
        e = _exponent_of(q, 3)
        if not (isprime(e) and e % 2 == 1):
            return f"q = {q} must be 3^p with p an odd prime"
        return ""
    if not isprime(q) or q <= 3:
        return f"q = {q} must be a prime greater than 3"
    if (q * q + 1) % 5 != 0:
        return f"q = {q} must satisfy q^2 + 1 = 0 (mod 5)"
    return ""


def thompson_family_check(key: FamilyKey) -> bool:
    return thompson_violation(key) == ""


def simple_order(key: FamilyKey) -> int:
    q = key.q
    if key.family == "L3_3":
        return 5616
    if key.family == "SZ":
        return q * q * (q - 1) * (q * q + 1)
    if key.family == "L2_2P":
        return q * (q - 1) * (q + 1)
    return q * (q - 1) * (q + 1) // 2
