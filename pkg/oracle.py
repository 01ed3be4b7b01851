"""Symbolic classification of the pi-submaximal subgroups of a minimal simple
group: pure arithmetic on (family, q, pi), no group computation."""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from pi_arith import (FamilyKey, PrimeSet, pi_part, prime_power, prime_support,
                      simple_order, thompson_violation)
from structid import (StructureDescriptor, cm_c4, cyclic, dihedral, elem_abelian,
                      expected_order, frob_cq_cm, frob_eq_cm, named, normalize,
                      semidihedral, sz_borel, whole)
from utils import InvalidInputError

SCHEMA = 1

FAMILY_SLUGS = {
    "L2_2P": "l2-2p",
    "L2_3P": "l2-3p",
    "L2_PRIME": "l2-prime",
    "SZ": "sz",
    "L3_3": "l3-3",
}

INVARIANT = "INVARIANT"
FUSED_BY_OUTER = "FUSED_BY_OUTER"

EMPTY_PI = "EMPTY_PI"
SINGLE_PRIME = "SINGLE_PRIME"
FULL = "FULL"
TABLE = "TABLE"

# Residues of q for which the dihedral Hall subgroup of the torus normaliser
# sits inside an S4, keyed by the sign of the torus.
D8_IN_S4 = {1: (41,), -1: (7,)}      # mod 48
D6_IN_S4 = {1: (7, 31), -1: (41, 65)}  # mod 72


@dataclass(frozen=True)
class CaseKey:
    family_key: FamilyKey
    pi: PrimeSet

    def __post_init__(self):
        violation = thompson_violation(self.family_key)
        if violation:
            raise InvalidInputError(f"{self.family_key}: {violation}")

    @property
    def sort_key(self) -> tuple:
        return (self.family_key.family, self.family_key.q, self.pi.primes)

    def to_dict(self) -> dict:
        return {
            "family": FAMILY_SLUGS[self.family_key.family],
            "q": self.family_key.q,
            "pi": list(self.pi.primes),
        }

    def __str__(self) -> str:
        return f"{self.family_key} pi={self.pi}"


@dataclass(frozen=True)
class SubmaxRecord:
    descriptor: StructureDescriptor
    table: str
    row: int
    ncc: int = 1
    aut_action: str = INVARIANT
    pi_maximal: bool = True
    container: Optional[StructureDescriptor] = None
    container_note: str = ""
    pronormal: bool = True
    # which construction realises the row; used by targeted verification only
    source: str = field(default="", compare=False)

    def __post_init__(self):
        if (self.container is None) != self.pi_maximal:
            raise InvalidInputError(f"{self.descriptor}: a container is given iff the row is not pi-maximal")

    @property
    def order(self) -> int:
        return expected_order(self.descriptor)

    @property
    def intravariant(self) -> bool:
        return self.ncc == 1

    def to_dict(self) -> dict:
        return {
            "descriptor": self.descriptor.to_dict(),
            "order": self.order,
            "ncc": self.ncc,
            "aut_action": self.aut_action,
            "pi_maximal": self.pi_maximal,
            "container": self.container.to_dict() if self.container else None,
            "pronormal": self.pronormal,
            "intravariant": self.intravariant,
            "table": self.table,
            "row": self.row,
        }


@dataclass(frozen=True)
class ClassifyResult:
    case: CaseKey
    regime: str
    records: Tuple[SubmaxRecord, ...]
    prime: Optional[int] = None

    def to_dict(self) -> dict:
        payload = {"schema": SCHEMA, **self.case.to_dict(), "regime": self.regime,
                   "records": [r.to_dict() for r in self.records]}
        if self.prime is not None:
            payload["prime"] = self.prime
        return payload


# -----------------------------------------------------------------------------
# Helpers
# -----------------------------------------------------------------------------

def _suzuki_r(q: int) -> int:
    _, p = prime_power(q)
    return 2 ** ((p + 1) // 2)


def _row(table: str, row: int, d: StructureDescriptor, source: str, **flags) -> SubmaxRecord:
    return SubmaxRecord(descriptor=normalize(d), table=table, row=row, source=source, **flags)


def _not_maximal(container: StructureDescriptor, note: str) -> dict:
    return {"pi_maximal": False, "container": container, "container_note": note}


def _fused() -> dict:
    return {"ncc": 2, "aut_action": FUSED_BY_OUTER}


def sylow_descriptor(key: FamilyKey, p: int) -> StructureDescriptor:
    order = simple_order(key)
    if order % p:
        raise InvalidInputError(f"{p} does not divide |{key}|")
    n = pi_part(order, PrimeSet((p,)))
    if key.family == "L3_3":
        return {2: semidihedral(16), 3: named("EXTRASPECIAL_27"), 13: cyclic(13)}[p]
    q = key.q
    char, k = prime_power(q)
    if key.family == "SZ":
        return sz_borel(q, 1) if p == 2 else cyclic(n)
    if p == char:
        return normalize(elem_abelian(char, k))
    if p == 2:
        return normalize(dihedral(n))
    return cyclic(n)


# -----------------------------------------------------------------------------
# Per-family rows
# -----------------------------------------------------------------------------

def _l2_even(q: int, pi: PrimeSet) -> List[SubmaxRecord]:
    plus, minus = pi & prime_support(q - 1), pi & prime_support(q + 1)
    a, b = pi_part(q - 1, pi), pi_part(q + 1, pi)
    if 2 not in pi:
        rows = []
        if plus:
            rows.append(_row("l2_2p.odd", 1, cyclic(a), "torus+"))
        if minus:
            rows.append(_row("l2_2p.odd", 2, cyclic(b), "torus-"))
        return rows
    rows = [_row("l2_2p.even", 1, frob_eq_cm(q, a), "borel")]
    if plus:
        rows.append(_row("l2_2p.even", 2, dihedral(2 * a), "torus+"))
    if minus:
        rows.append(_row("l2_2p.even", 3, dihedral(2 * b), "torus-"))
    return rows


def _l2_three(q: int, pi: PrimeSet) -> List[SubmaxRecord]:
    plus, minus = pi & prime_support(q - 1), pi & prime_support(q + 1)
    a, b = pi_part(q - 1, pi), pi_part(q + 1, pi)
    if 2 not in pi:
        rows = []
        if 3 in pi:
            rows.append(_row("l2_3p.odd", 1, frob_eq_cm(q, a), "borel"))
        elif plus:
            rows.append(_row("l2_3p.odd", 2, cyclic(a), "torus+"))
        if minus:
            rows.append(_row("l2_3p.odd", 3, cyclic(b), "torus-"))
        return rows
    rows = []
    if 3 in pi:
        rows.append(_row("l2_3p.even", 1, frob_eq_cm(q, a // 2), "borel"))
    if plus != PrimeSet((2,)):
        rows.append(_row("l2_3p.even", 2, dihedral(a), "torus+"))
    # a Klein four Sylow 2-subgroup is normal in an A4 once 3 is in pi
    if not (minus == PrimeSet((2,)) and 3 in pi):
        rows.append(_row("l2_3p.even", 3, dihedral(b), "torus-"))
    if 3 in pi:
        rows.append(_row("l2_3p.even", 4, named("ALT4"), "alt4"))
    return rows


def _l2_prime(q: int, pi: PrimeSet) -> List[SubmaxRecord]:
    plus, minus = pi & prime_support(q - 1), pi & prime_support(q + 1)
    a, b = pi_part(q - 1, pi), pi_part(q + 1, pi)
    if 2 not in pi:
        rows = []
        if q in pi:
            rows.append(_row("l2_prime.odd", 1, frob_cq_cm(q, a), "borel"))
        elif plus:
            rows.append(_row("l2_prime.odd", 2, cyclic(a), "torus+"))
        if minus:
            rows.append(_row("l2_prime.odd", 3, cyclic(b), "torus-"))
        return rows
    rows = []
    if q in pi:
        rows.append(_row("l2_prime.even", 1, frob_cq_cm(q, a // 2), "borel"))
    two, two_three = PrimeSet((2,)), PrimeSet((2, 3))
    for row, eps in ((2, 1), (3, -1)):
        part = pi & prime_support(q - eps)
        n = pi_part(q - eps, pi)
        if not (part != two or 3 not in pi or (q - eps) % 8 == 0):
            continue
        if n == 2:
            continue
        flags = {}
        if part == two and 3 in pi and q % 48 in D8_IN_S4[eps]:
            flags = _not_maximal(named("SYM4"), "H is a dihedral Sylow 2-subgroup of order 8 inside an S4")
        elif part == two_three and q % 72 in D6_IN_S4[eps]:
            flags = _not_maximal(named("SYM4"), "H is a D6 inside an S4")
        rows.append(_row("l2_prime.even", row, dihedral(n), "torus+" if eps > 0 else "torus-", **flags))
    if 3 in pi and q % 8 in (3, 5):
        rows.append(_row("l2_prime.even", 4, named("ALT4"), "alt4"))
    if 3 in pi and q % 8 in (1, 7):
        rows.append(_row("l2_prime.even", 5, named("SYM4"), "sym4", **_fused()))
    return rows


def _suzuki(q: int, pi: PrimeSet) -> List[SubmaxRecord]:
    r = _suzuki_r(q)
    zero = pi & prime_support(q - 1)
    plus, minus = pi & prime_support(q - r + 1), pi & prime_support(q + r + 1)
    a, b, c = pi_part(q - 1, pi), pi_part(q - r + 1, pi), pi_part(q + r + 1, pi)
    if 2 not in pi:
        rows = []
        if zero:
            rows.append(_row("sz.odd", 1, cyclic(a), "torus0"))
        if plus:
            rows.append(_row("sz.odd", 2, cyclic(b), "torus+"))
        if minus:
            rows.append(_row("sz.odd", 3, cyclic(c), "torus-"))
        return rows
    rows = [_row("sz.even", 1, sz_borel(q, a), "borel")]
    if zero:
        rows.append(_row("sz.even", 2, dihedral(2 * a), "torus0"))
    if plus:
        rows.append(_row("sz.even", 3, cm_c4(b), "torus+"))
    if minus:
        rows.append(_row("sz.even", 4, cm_c4(c), "torus-"))
    return rows


def _l3_3(pi: PrimeSet) -> List[SubmaxRecord]:
    support = pi & PrimeSet((2, 3, 13))
    if support == PrimeSet((3, 13)):
        return [_row("l3_3.3_13", 1, named("C13_C3"), "max"),
                _row("l3_3.3_13", 2, named("EXTRASPECIAL_27"), "sylow")]
    if support == PrimeSet((2, 13)):
        return [_row("l3_3.2_13", 1, cyclic(13), "sylow"),
                _row("l3_3.2_13", 2, semidihedral(16), "sylow")]
    container = named("E9_GL23")
    note = "always contained in E9:GL2(3)"
    return [_row("l3_3.2_3", 1, container, "max", **_fused()),
            _row("l3_3.2_3", 2, named("ES27_BY_V4"), "max", **_not_maximal(container, note)),
            _row("l3_3.2_3", 3, named("GL2_3"), "max", **_not_maximal(container, note)),
            _row("l3_3.2_3", 4, named("SYM4"), "max")]


# -----------------------------------------------------------------------------
# Public operations
# -----------------------------------------------------------------------------

def classify(case: CaseKey) -> ClassifyResult:
    key, pi = case.family_key, case.pi
    order = simple_order(key)
    support = prime_support(order)
    inter = pi & support
    if not inter:
        return ClassifyResult(case, EMPTY_PI, (_row("degenerate", 1, StructureDescriptor("TRIVIAL"), "trivial"),))
    if len(inter) == 1:
        p = inter.primes[0]
        return ClassifyResult(case, SINGLE_PRIME, (_row("degenerate", 2, sylow_descriptor(key, p), "sylow"),), prime=p)
    if support.issubset(pi):
        return ClassifyResult(case, FULL, (_row("degenerate", 3, whole(order), "whole"),))
    q = key.q
    if key.family == "L2_2P":
        rows = _l2_even(q, pi)
    elif key.family == "L2_3P":
        rows = _l2_three(q, pi)
    elif key.family == "L2_PRIME":
        rows = _l2_prime(q, pi)
    elif key.family == "SZ":
        rows = _suzuki(q, pi)
    else:
        rows = _l3_3(pi)
    return ClassifyResult(case, TABLE, tuple(rows))


@dataclass(frozen=True)
class MaximalRow:
    descriptor: StructureDescriptor
    ncc: int = 1
    condition: str = ""


def maximal_subgroups_table(key: FamilyKey) -> List[MaximalRow]:
    violation = thompson_violation(key)
    if violation:
        raise InvalidInputError(f"{key}: {violation}")
    q = key.q
    if key.family == "L2_2P":
        return [MaximalRow(normalize(frob_eq_cm(q, q - 1))), MaximalRow(dihedral(2 * (q - 1))),
                MaximalRow(dihedral(2 * (q + 1)))]
    if key.family == "L2_3P":
        return [MaximalRow(frob_eq_cm(q, (q - 1) // 2)), MaximalRow(dihedral(q - 1)),
                MaximalRow(dihedral(q + 1)), MaximalRow(named("ALT4"))]
    if key.family == "L2_PRIME":
        rows = [MaximalRow(normalize(frob_cq_cm(q, (q - 1) // 2)))]
        if q != 7:
            rows += [MaximalRow(dihedral(q - 1), condition="q != 7"),
                     MaximalRow(dihedral(q + 1), condition="q != 7")]
        if q % 8 in (3, 5):
            rows.append(MaximalRow(named("ALT4"), condition="q = +-3 (mod 8)"))
        else:
            rows.append(MaximalRow(named("SYM4"), ncc=2, condition="q = +-1 (mod 8)"))
        return rows
    if key.family == "SZ":
        r = _suzuki_r(q)
        return [MaximalRow(sz_borel(q, q - 1)), MaximalRow(dihedral(2 * (q - 1))),
                MaximalRow(cm_c4(q - r + 1)), MaximalRow(cm_c4(q + r + 1))]
    return [MaximalRow(named("E9_GL23"), ncc=2), MaximalRow(named("C13_C3")), MaximalRow(named("SYM4"))]


@dataclass(frozen=True)
class AutException:
    """A maximal subgroup of Aut(S) whose intersection with S is not maximal in S."""
    ambient_shape: str
    ambient_order: int
    intersection: StructureDescriptor


def aut_maximal_exceptions(key: FamilyKey) -> List[AutException]:
    if key.family == "L2_PRIME" and key.q == 7:
        return [AutException("D12", 12, dihedral(6)), AutException("D16", 16, dihedral(8))]
    if key.family == "L3_3":
        return [AutException("GL2(3):2", 96, named("GL2_3")),
                AutException("3^(1+2):D8", 216, named("ES27_BY_V4"))]
    return []


def dpi_predict(case: CaseKey) -> bool:
    result = classify(case)
    if result.regime != TABLE:
        return True
    return len(result.records) == 1 and result.records[0].ncc == 1


def dpi_criterion_l2(q: int, pi: PrimeSet) -> bool:
    """For L2(q) in characteristic p with 2 outside pi and p inside: D_pi iff
    pi meets |S| only in p and the primes of q - 1."""
    p, _ = prime_power(q)
    if 2 in pi or p not in pi:
        raise InvalidInputError(f"the criterion needs 2 not in pi and {p} in pi, got {pi}")
    order = q * (q - 1) * (q + 1) // (1 if p == 2 else 2)
    return (pi & prime_support(order)).issubset(PrimeSet((p,)) | prime_support(q - 1))
