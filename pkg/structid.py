"""Structure descriptors for the small subgroups that occur in the
classification tables, and their identification on concrete subgroups."""
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime

from ffield import make_field
from groups import (affine_action, elementary_matrix, projective_action,
                    sz_borel_generators, vector_action)
from permgroup import (PermGroup, Subgroup, cayley_table, element_orders,
                       is_abelian)
from pi_arith import prime_power
from utils import InvalidInputError, SubmaxError, logger

IDENTIFY_LIMIT = 1000

NAMED_ORDERS = {
    "ALT4": 12,
    "SYM4": 24,
    "GL2_3": 48,
    "EXTRASPECIAL_27": 27,
    "ES27_BY_V4": 108,
    "E9_GL23": 432,
    "C13_C3": 39,
}

KINDS = ("TRIVIAL", "CYCLIC", "DIHEDRAL", "SEMIDIHEDRAL", "ELEM_ABELIAN", "FROB_EQ_CM",
         "FROB_CQ_CM", "SZ_BOREL", "CM_C4") + tuple(NAMED_ORDERS) + ("WHOLE", "UNRECOGNIZED")


@dataclass(frozen=True)
class StructureDescriptor:
    kind: str
    params: Tuple[int, ...] = ()
    fingerprint: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown descriptor kind {self.kind!r}")
        if any(p <= 0 for p in self.params):
            raise InvalidInputError(f"{self.kind}: parameters must be positive, got {self.params}")

    @property
    def recognized(self) -> bool:
        return self.kind != "UNRECOGNIZED"

    def to_dict(self) -> dict:
        payload = {"kind": self.kind, "params": list(self.params)}
        if not self.recognized:
            payload["fingerprint"] = _jsonable(self.fingerprint)
        return payload

    def __str__(self) -> str:
        if not self.params:
            return self.kind
        return f"{self.kind}({','.join(map(str, self.params))})"


def _jsonable(value):
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    return int(value)


# Constructors -------------------------------------------------------------

def trivial() -> StructureDescriptor:
    return StructureDescriptor("TRIVIAL")


def cyclic(n: int) -> StructureDescriptor:
    return StructureDescriptor("CYCLIC", (n,))


def dihedral(order: int) -> StructureDescriptor:
    return StructureDescriptor("DIHEDRAL", (order,))


def semidihedral(order: int) -> StructureDescriptor:
    return StructureDescriptor("SEMIDIHEDRAL", (order,))


def elem_abelian(p: int, k: int) -> StructureDescriptor:
    return StructureDescriptor("ELEM_ABELIAN", (p, k))


def frob_eq_cm(q: int, m: int) -> StructureDescriptor:
    return StructureDescriptor("FROB_EQ_CM", (q, m))


def frob_cq_cm(q: int, m: int) -> StructureDescriptor:
    return StructureDescriptor("FROB_CQ_CM", (q, m))


def sz_borel(q: int, m: int) -> StructureDescriptor:
    return StructureDescriptor("SZ_BOREL", (q, m))


def cm_c4(m: int) -> StructureDescriptor:
    return StructureDescriptor("CM_C4", (m,))


def named(kind: str) -> StructureDescriptor:
    if kind not in NAMED_ORDERS:
        raise InvalidInputError(f"{kind} is not a named descriptor")
    return StructureDescriptor(kind)


def whole(order: int) -> StructureDescriptor:
    """The simple group itself, for prime sets covering its whole order."""
    return StructureDescriptor("WHOLE", (order,))


def unrecognized(order: int, fingerprint: tuple) -> StructureDescriptor:
    return StructureDescriptor("UNRECOGNIZED", (order,), fingerprint)


# -----------------------------------------------------------------------------
# Orders and canonical form
# -----------------------------------------------------------------------------

def expected_order(d: StructureDescriptor) -> int:
    kind, params = d.kind, d.params
    if kind == "UNRECOGNIZED":
        raise InvalidInputError("an unrecognized descriptor has no expected order")
    if kind == "TRIVIAL":
        return 1
    if kind in ("CYCLIC", "DIHEDRAL", "SEMIDIHEDRAL", "WHOLE"):
        return params[0]
    if kind == "ELEM_ABELIAN":
        return params[0] ** params[1]
    if kind in ("FROB_EQ_CM", "FROB_CQ_CM"):
        return params[0] * params[1]
    if kind == "SZ_BOREL":
        return params[0] ** 2 * params[1]
    if kind == "CM_C4":
        return 4 * params[0]
    return NAMED_ORDERS[kind]


def normalize(d: StructureDescriptor) -> StructureDescriptor:
    """Collapse degenerate parameters to the canonical descriptor."""
    kind, params = d.kind, d.params
    if kind == "CYCLIC" and params == (1,):
        return trivial()
    if kind == "DIHEDRAL":
        if params[0] % 2:
            raise InvalidInputError(f"dihedral order must be even, got {params[0]}")
        if params[0] == 2:
            return cyclic(2)
        if params[0] == 4:
            return elem_abelian(2, 2)
    if kind == "ELEM_ABELIAN" and params[1] == 1:
        return cyclic(params[0])
    if kind == "FROB_EQ_CM":
        q, m = params
        p, k = prime_power(q)
        if m == 1:
            return cyclic(p) if k == 1 else elem_abelian(p, k)
        if q == 4 and m == 3:
            return named("ALT4")
        if k == 1:
            return normalize(frob_cq_cm(q, m))
    if kind == "FROB_CQ_CM":
        q, m = params
        if m == 1:
            return cyclic(q)
        if m == 2:
            return dihedral(2 * q)
        if m == 4 and isprime(q):
            return cm_c4(q)
        if (q, m) == (13, 3):
            return named("C13_C3")
    if kind == "CM_C4" and params == (1,):
        return cyclic(4)
    return d


# -----------------------------------------------------------------------------
# Cayley-table view of a materialised subgroup
# -----------------------------------------------------------------------------

class _Table:
    def __init__(self, H: Subgroup):
        self.n = len(H)
        self.T = cayley_table(H)
        self.e = int(np.nonzero((self.T == np.arange(self.n)).all(axis=1))[0][0])
        self.orders = element_orders(H.rows)
        self.inv = np.argmax(self.T == self.e, axis=1)
        self.gens = [int(i) for i in H.index_of_keys(H.parent.keys(np.asarray(H.generators, dtype=np.int32).reshape(-1, H.parent.degree)))] if H.generators else []

    def closure(self, elements: Sequence[int]) -> np.ndarray:
        members = np.zeros(self.n, dtype=bool)
        members[self.e] = True
        gens = np.asarray(list(elements), dtype=np.int64)
        frontier = np.array([self.e])
        while len(frontier) and len(gens):
            new = np.unique(self.T[np.ix_(frontier, gens)].ravel())
            new = new[~members[new]]
            members[new] = True
            frontier = new
        return members

    def is_normal(self, mask: np.ndarray) -> bool:
        idx = np.nonzero(mask)[0]
        for g in self.gens:
            conj = self.T[self.T[self.inv[g], idx], g]
            if not mask[conj].all():
                return False
        return True

    def centralizer(self, mask: np.ndarray) -> np.ndarray:
        idx = np.nonzero(mask)[0]
        return (self.T[:, idx] == self.T[idx, :].T).all(axis=1)

    def element_of_order(self, m: int) -> Optional[int]:
        hits = np.nonzero(self.orders == m)[0]
        return int(hits[0]) if len(hits) else None

    def prime_power_elements(self, p: int) -> np.ndarray:
        o = self.orders.copy()
        while True:
            divisible = (o % p == 0) & (o > 1)
            if not divisible.any():
                break
            o[divisible] //= p
        return o == 1

    def is_abelian_set(self, mask: np.ndarray) -> bool:
        idx = np.nonzero(mask)[0]
        sub = self.T[np.ix_(idx, idx)]
        return bool((sub == sub.T).all())

    def histogram(self, mask: Optional[np.ndarray] = None) -> Dict[int, int]:
        orders = self.orders if mask is None else self.orders[mask]
        values, counts = np.unique(orders, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}


# -----------------------------------------------------------------------------
# Shape tests
# -----------------------------------------------------------------------------

def _is_dihedral(t: _Table) -> bool:
    m = t.n // 2
    if t.n % 2 or m < 3:
        return False
    a = t.element_of_order(m)
    if a is None:
        return False
    rot = t.closure([a])
    return bool((t.orders[~rot] == 2).all())


def _is_semidihedral(t: _Table) -> bool:
    n = t.n
    if n < 16 or n & (n - 1):
        return False
    a = t.element_of_order(n // 2)
    if a is None:
        return False
    rot = t.closure([a])
    # a^(n/4 - 1)
    target, x = t.e, a
    e = n // 4 - 1
    while e:
        if e & 1:
            target = t.T[target, x]
        x = t.T[x, x]
        e >>= 1
    for b in np.nonzero(~rot & (t.orders == 2))[0]:
        if t.T[t.T[t.inv[b], a], b] == target:
            return True
    return False


def _normal_sylow(t: _Table, p: int) -> Optional[np.ndarray]:
    mask = t.prime_power_elements(p)
    size = int(mask.sum())
    p_part = 1
    while t.n % (p_part * p) == 0:
        p_part *= p
    return mask if size == p_part else None


def _cyclic_quotient_faithful(t: _Table, mask: np.ndarray) -> Optional[int]:
    """m = |H : P| when H/P is cyclic with an element of order m and C_H(P) = P."""
    m = t.n // int(mask.sum())
    if t.element_of_order(m) is None and m > 1:
        return None
    if not (t.centralizer(mask) == mask).all():
        return None
    return m


def _frobenius_shape(t: _Table) -> Optional[StructureDescriptor]:
    primes = sorted({p for p in range(2, t.n + 1) if t.n % p == 0 and isprime(p)})
    for p in primes:
        P = _normal_sylow(t, p)
        if P is None:
            continue
        size = int(P.sum())
        hist = t.histogram(P)
        if size == 1 or set(hist) - {1, p} or not t.is_abelian_set(P):
            continue
        m = _cyclic_quotient_faithful(t, P)
        if m is not None and m > 1:
            return frob_eq_cm(size, m)
    return None


def _cm_c4_shape(t: _Table) -> Optional[StructureDescriptor]:
    if t.n % 4 or (t.n // 4) % 2 == 0 or t.n < 12:
        return None
    m = t.n // 4
    c = t.element_of_order(m)
    if c is None or t.element_of_order(4) is None:
        return None
    C = t.closure([c])
    if not t.is_normal(C) or not (t.centralizer(C) == C).all():
        return None
    return cm_c4(m)


def _sz_borel_shape(t: _Table) -> Optional[StructureDescriptor]:
    P = _normal_sylow(t, 2)
    if P is None:
        return None
    size = int(P.sum())
    q = int(round(size ** 0.5))
    if q * q != size or q < 8 or t.is_abelian_set(P):
        return None
    hist = t.histogram(P)
    if max(hist) != 4:
        return None
    idx = np.nonzero(P)[0]
    sub = t.T[np.ix_(idx, idx)]
    centre = int((sub == sub.T).all(axis=1).sum())
    if centre != q:
        return None
    m = t.n // size
    if m > 1 and (t.element_of_order(m) is None or (t.centralizer(P) & ~P).any()):
        return None
    return sz_borel(q, m)


# -----------------------------------------------------------------------------
# Named models and isomorphism
# -----------------------------------------------------------------------------

def _mat_gens(mats, p: int, dim: int, action: str) -> List[tuple]:
    if action == "vector":
        return [vector_action(M, p, dim) for M in mats]
    if action == "projective":
        return [projective_action(M, p, dim) for M in mats]
    return [affine_action(M, (0,) * dim, p, dim) for M in mats]


GL23_MATRICES = (((1, 1), (0, 1)), ((1, 0), (1, 1)), ((2, 0), (0, 1)))


def _affine_line(m: int, units: Sequence[int]) -> List[tuple]:
    gens = [tuple((x + 1) % m for x in range(m))]
    gens += [tuple((u * x) % m for x in range(m)) for u in units]
    return gens


@lru_cache(maxsize=None)
def model(d: StructureDescriptor) -> Subgroup:
    """A concrete permutation group realising the descriptor."""

    d = normalize(d)
    kind, params = d.kind, d.params
    if kind == "TRIVIAL":
        degree, gens = 1, []
    elif kind == "CYCLIC":
        degree, gens = params[0], _affine_line(params[0], [])
    elif kind == "DIHEDRAL":
        degree, gens = params[0] // 2, _affine_line(params[0] // 2, [params[0] // 2 - 1])
    elif kind == "SEMIDIHEDRAL":
        M = params[0] // 2
        degree, gens = M, _affine_line(M, [M // 2 - 1])
    elif kind in ("ELEM_ABELIAN", "FROB_EQ_CM", "FROB_CQ_CM"):
        if kind == "ELEM_ABELIAN":
            p, k = params
            q, m = p ** k, 1
        else:
            q, m = params
            p, k = prime_power(q)
        F = make_field(p, k)
        if (q - 1) % m:
            raise InvalidInputError(f"no model for {d}: {m} does not divide {q - 1}")
        mu = F.pow(F.generator(), (q - 1) // m)
        degree = q
        gens = [tuple(F.add(x, b) for x in F.elements()) for b in (p ** i for i in range(k))]
        gens.append(tuple(F.mul(mu, x) for x in F.elements()))
    elif kind == "CM_C4":
        m = params[0]
        units = [u for u in range(2, m) if (u * u + 1) % m == 0]
        if not units:
            raise InvalidInputError(f"no model for {d}: -1 is not a square modulo {m}")
        degree, gens = m, _affine_line(m, units[:1])
    elif kind == "SZ_BOREL":
        q, m = params
        F = make_field(2, prime_power(q)[1])
        degree, gens = q * q + 1, sz_borel_generators(F, m)
    elif kind == "ALT4":
        degree, gens = 4, [(1, 2, 0, 3), (1, 0, 3, 2)]
    elif kind == "SYM4":
        degree, gens = 4, [(1, 0, 2, 3), (1, 2, 3, 0)]
    elif kind == "GL2_3":
        degree, gens = 8, _mat_gens(GL23_MATRICES, 3, 2, "vector")
    elif kind == "E9_GL23":
        degree = 9
        gens = _mat_gens(GL23_MATRICES, 3, 2, "affine")
        gens.append(affine_action(((1, 0), (0, 1)), (1, 0), 3, 2))
    elif kind == "EXTRASPECIAL_27":
        degree = 13
        gens = _mat_gens([elementary_matrix(3, 0, 1), elementary_matrix(3, 1, 2)], 3, 3, "projective")
    elif kind == "ES27_BY_V4":
        degree = 13
        mats = [elementary_matrix(3, 0, 1), elementary_matrix(3, 1, 2),
                ((1, 0, 0), (0, 2, 0), (0, 0, 2)), ((2, 0, 0), (0, 1, 0), (0, 0, 2))]
        gens = _mat_gens(mats, 3, 3, "projective")
    elif kind == "C13_C3":
        degree, gens = 13, _affine_line(13, [3])
    else:
        raise InvalidInputError(f"no model for {d}")
    group = PermGroup(degree, gens, name=str(d))
    if group.order != expected_order(d):
        raise SubmaxError(f"model of {d} has order {group.order}")
    return Subgroup.from_rows(group, group.whole().rows)


def _consistent_map(tm: _Table, th: _Table, images: Sequence[int]) -> bool:
    phi = np.full(tm.n, -1, dtype=np.int64)
    used = np.zeros(th.n, dtype=bool)
    phi[tm.e] = th.e
    used[th.e] = True
    queue = [tm.e]
    for x in queue:
        for g, h in zip(tm.gens, images):
            y, img = tm.T[x, g], th.T[phi[x], h]
            if phi[y] >= 0:
                if phi[y] != img:
                    return False
            else:
                if used[img]:
                    return False
                phi[y] = img
                used[img] = True
                queue.append(y)
    return len(queue) == tm.n


def _class_reps(t: _Table, candidates: np.ndarray) -> List[int]:
    seen = np.zeros(t.n, dtype=bool)
    reps = []
    for c in candidates:
        if seen[c]:
            continue
        reps.append(int(c))
        seen[t.T[t.T[t.inv, c], np.arange(t.n)]] = True
    return reps


def is_isomorphic(H: Subgroup, K: Subgroup) -> bool:
    """Generator-image backtracking after invariant filters."""
    if len(H) != len(K):
        return False
    th, tk = _Table(H), _Table(K)
    if th.histogram() != tk.histogram() or is_abelian(H) != is_abelian(K):
        return False
    if not tk.gens:
        return True
    pools = [np.nonzero(th.orders == tk.orders[g])[0] for g in tk.gens]
    pools[0] = np.array(_class_reps(th, pools[0]))
    for images in product(*pools):
        if th.closure(images).sum() != th.n:
            continue
        if _consistent_map(tk, th, images):
            return True
    return False


# -----------------------------------------------------------------------------
# Identification
# -----------------------------------------------------------------------------

def identify(H: Subgroup) -> StructureDescriptor:
    n = len(H)
    if n > IDENTIFY_LIMIT:
        raise InvalidInputError(f"identify needs |H| <= {IDENTIFY_LIMIT}, got {n}")
    if n == 1:
        return trivial()
    t = _Table(H)
    hist = t.histogram()
    if is_abelian(H):
        if n in hist:
            return normalize(cyclic(n))
        support = [p for p in hist if p > 1]
        if len(set(support)) == 1 and isprime(support[0]):
            p = support[0]
            return normalize(elem_abelian(p, prime_power(n)[1]))
        return unrecognized(n, H.fingerprint())
    for kind, order in NAMED_ORDERS.items():
        if order == n and is_isomorphic(H, model(named(kind))):
            return named(kind)
    if _is_dihedral(t):
        return normalize(dihedral(n))
    if _is_semidihedral(t):
        return semidihedral(n)
    for shape in (_cm_c4_shape, _sz_borel_shape, _frobenius_shape):
        d = shape(t)
        if d is not None:
            return normalize(d)
    logger.debug(f"unrecognized subgroup of order {n}: {H.fingerprint()}")
    return unrecognized(n, H.fingerprint())


def matches(H: Subgroup, d: StructureDescriptor) -> bool:
    return identify(H) == normalize(d)
