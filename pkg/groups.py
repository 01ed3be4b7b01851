"""Constructors for the Thompson-list groups, their automorphism groups and
the SL2(5) test vehicle, all as permutation groups on geometric points."""
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import List, Sequence, Tuple

from ffield import FieldSpec, make_field
from permgroup import Perm, PermGroup, Subgroup, identity, inverse, mul, perm_order
from pi_arith import FamilyKey, prime_power, simple_order, thompson_violation
from utils import ConstructionError, InvalidInputError, logger

Matrix = Tuple[Tuple[int, ...], ...]


# -----------------------------------------------------------------------------
# Projective line
# -----------------------------------------------------------------------------
# Point 0 is infinity, point 1 + a is the field element with encoding a.

def mobius(F: FieldSpec, a: int, b: int, c: int, d: int) -> Perm:
    """x -> (a x + b) / (c x + d) on the projective line."""
    images = [0] * (F.size + 1)
    images[0] = 1 + F.mul(a, F.inv(c)) if c else 0
    for x in F.elements():
        num = F.add(F.mul(a, x), b)
        den = F.add(F.mul(c, x), d)
        images[1 + x] = 0 if den == 0 else 1 + F.mul(num, F.inv(den))
    return tuple(images)


def line_frobenius(F: FieldSpec) -> Perm:
    return (0,) + tuple(1 + F.frobenius(x, 1) for x in F.elements())


def _is_square(F: FieldSpec, a: int) -> bool:
    if a == 0 or F.p == 2:
        return True
    return F.pow(a, (F.size - 1) // 2) == 1


def _sqrt(F: FieldSpec, a: int) -> int:
    for x in F.elements():
        if F.mul(x, x) == a:
            return x
    raise InvalidInputError(f"{a} is not a square in {F}")


class LineSubgroups:
    """Explicit generators for the subgroups of L2(q) that the tables name.

    Every map is a Moebius transformation of determinant a nonzero square, so
    it lies in the simple group.
    """

    def __init__(self, q: int):
        self.F = _field_of(q)
        self.q = q
        self.d = 1 if q % 2 == 0 else 2
        self._nonsplit: Tuple[Perm, Perm] = ()

    def _power(self, g: Perm, e: int) -> Perm:
        result = identity(len(g))
        for _ in range(e):
            result = mul(result, g)
        return result

    def _element_of_order(self, g: Perm, full: int, m: int) -> Perm:
        if full % m:
            raise InvalidInputError(f"no element of order {m} in a cyclic group of order {full}")
        return self._power(g, full // m)

    def translations(self) -> List[Perm]:
        F = self.F
        return [mobius(F, 1, F.p ** i, 0, 1) for i in range(F.k)]

    def split_torus(self) -> Perm:
        F = self.F
        lam = F.generator()
        return mobius(F, lam, 0, 0, F.inv(lam))

    def split_involution(self) -> Perm:
        F = self.F
        return mobius(F, 0, F.neg(1), 1, 0)

    def nonsplit(self) -> Tuple[Perm, Perm]:
        """A generator of the non-split torus and an involution inverting it."""
        if not self._nonsplit:
            F, target = self.F, (self.q + 1) // self.d
            minus_one = F.neg(1)
            torus = None
            for t in F.elements():
                g = mobius(F, 0, minus_one, 1, t)
                if perm_order(g) == target:
                    torus = (g, t)
                    break
            if torus is None:
                raise ConstructionError(f"no non-split torus element found in L2({self.q})")
            g, t = torus
            for c in F.elements():
                a = 1
                det = F.neg(F.add(F.add(F.mul(a, a), F.mul(F.mul(a, c), t)), F.mul(c, c)))
                if det and _is_square(F, det):
                    w = mobius(F, a, F.add(F.mul(t, a), c), c, F.neg(a))
                    self._nonsplit = (g, w)
                    break
            else:
                raise ConstructionError(f"no involution inverts the non-split torus of L2({self.q})")
        return self._nonsplit

    def borel(self, m: int) -> List[Perm]:
        return self.translations() + [self._element_of_order(self.split_torus(), (self.q - 1) // self.d, m)]

    def torus(self, sign: int, m: int, with_involution: bool) -> List[Perm]:
        if sign > 0:
            gens = [self._element_of_order(self.split_torus(), (self.q - 1) // self.d, m)]
            w = self.split_involution()
        else:
            g, w = self.nonsplit()
            gens = [self._element_of_order(g, (self.q + 1) // self.d, m)]
        return gens + [w] if with_involution else gens

    def klein_four(self) -> List[Perm]:
        F = self.F
        if self.q % 2 == 0:
            raise InvalidInputError("the quaternion construction needs odd q")
        minus_one = F.neg(1)
        for u in F.elements():
            rest = F.sub(minus_one, F.mul(u, u))
            if _is_square(F, rest):
                v = _sqrt(F, rest)
                self._uv = (u, v)
                return [mobius(F, 0, minus_one, 1, 0), mobius(F, u, v, v, F.neg(u))]
        raise ConstructionError(f"-1 is not a sum of two squares in {F}")

    def alt4(self) -> List[Perm]:
        F = self.F
        gens = self.klein_four()
        u, v = self._uv
        half = F.inv(2 % F.p)
        one = 1
        a = F.mul(half, F.sub(F.sub(u, v), one))
        b = F.mul(half, F.add(F.add(u, v), F.neg(one)))
        c = F.mul(half, F.add(F.add(u, v), one))
        d = F.mul(half, F.sub(F.sub(v, u), one))
        return gens + [mobius(F, a, b, c, d)]

    def sym4(self) -> List[Perm]:
        F = self.F
        if not _is_square(F, 2 % F.p):
            raise InvalidInputError(f"L2({self.q}) has no S4: 2 is not a square")
        return self.alt4() + [mobius(F, 1, F.neg(1), 1, 1)]


def _field_of(q: int) -> FieldSpec:
    p, k = prime_power(q)
    return make_field(p, k)


def psl2_generators(F: FieldSpec) -> List[Perm]:
    lam = F.generator()
    one = 1
    minus_one = F.neg(one)
    return [
        mobius(F, one, one, 0, one),
        mobius(F, lam, 0, 0, F.inv(lam)),
        mobius(F, 0, minus_one, one, 0),
    ]


def _checked(group: PermGroup, expected: int) -> PermGroup:
    if group.order != expected:
        raise ConstructionError(f"{group.name}: order {group.order}, expected {expected}")
    return group


def psl2(q: int) -> PermGroup:
    p, k = prime_power(q)
    if q < 4:
        raise InvalidInputError(f"psl2 needs q >= 4, got {q}")
    F = make_field(p, k)
    expected = q * (q - 1) * (q + 1) // (1 if p == 2 else 2)
    return _checked(PermGroup(q + 1, psl2_generators(F), name=f"L2({q})"), expected)


# -----------------------------------------------------------------------------
# Suzuki groups
# -----------------------------------------------------------------------------

def _vec_mat(F: FieldSpec, v: Sequence[int], M: Matrix) -> Tuple[int, ...]:
    out = []
    for j in range(len(M[0])):
        acc = 0
        for i, vi in enumerate(v):
            if vi and M[i][j]:
                acc = F.add(acc, F.mul(vi, M[i][j]))
        out.append(acc)
    return tuple(out)


def _suzuki_translation(F: FieldSpec, a: int, b: int) -> Matrix:
    t = F.suzuki_twist
    a_t = t(a)
    a2 = F.mul(a, a)
    corner = F.add(F.add(F.mul(a2, a_t), F.mul(a, b)), t(b))
    return (
        (1, 0, 0, 0),
        (a, 1, 0, 0),
        (b, a_t, 1, 0),
        (corner, F.add(F.mul(a, a_t), b), a, 1),
    )


def _suzuki_torus(F: FieldSpec, kappa: int) -> Matrix:
    n = (F.k - 1) // 2
    e = 2 ** n
    d = (F.pow(kappa, 1 + e), F.pow(kappa, e), F.pow(kappa, -e), F.pow(kappa, -1 - e))
    return tuple(tuple(d[i] if i == j else 0 for j in range(4)) for i in range(4))


SUZUKI_INVOLUTION: Matrix = ((0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0))


def _ovoid_index(F: FieldSpec, v: Sequence[int]) -> int:
    """Point 0 is <e1>; <e4 S(a,b)> is point 1 + a + q*b."""
    if v[3] == 0:
        if any(v[1:]):
            raise ConstructionError(f"vector {v} is not on the ovoid")
        return 0
    s = F.inv(v[3])
    v = [F.mul(s, x) for x in v]
    a = v[2]
    b = F.add(v[1], F.mul(a, F.suzuki_twist(a)))
    expected = _vec_mat(F, (0, 0, 0, 1), _suzuki_translation(F, a, b))
    if tuple(v) != expected:
        raise ConstructionError(f"vector {tuple(v)} is not on the ovoid")
    return 1 + a + F.size * b


def _ovoid_points(F: FieldSpec) -> List[Tuple[int, ...]]:
    q = F.size
    points: List[Tuple[int, ...]] = [(1, 0, 0, 0)] + [()] * (q * q)
    for a, b in product(range(q), repeat=2):
        points[1 + a + q * b] = _vec_mat(F, (0, 0, 0, 1), _suzuki_translation(F, a, b))
    return points


def _ovoid_perm(F: FieldSpec, points, M: Matrix) -> Perm:
    return tuple(_ovoid_index(F, _vec_mat(F, v, M)) for v in points)


def sz_generators(F: FieldSpec) -> List[Perm]:
    points = _ovoid_points(F)
    basis = [2 ** i for i in range(F.k)]
    mats = [_suzuki_translation(F, a, 0) for a in basis] + [_suzuki_translation(F, 0, b) for b in basis]
    mats += [_suzuki_torus(F, F.generator()), SUZUKI_INVOLUTION]
    return [_ovoid_perm(F, points, M) for M in mats]


def sz_borel_generators(F: FieldSpec, m: int) -> List[Perm]:
    """The point stabiliser's Sylow 2-subgroup extended by a torus element of order m."""
    if (F.size - 1) % m:
        raise InvalidInputError(f"{m} does not divide {F.size - 1}")
    points = _ovoid_points(F)
    basis = [2 ** i for i in range(F.k)]
    mats = [_suzuki_translation(F, a, 0) for a in basis] + [_suzuki_translation(F, 0, b) for b in basis]
    kappa = F.pow(F.generator(), (F.size - 1) // m)
    mats.append(_suzuki_torus(F, kappa))
    return [_ovoid_perm(F, points, M) for M in mats]


def ovoid_frobenius(F: FieldSpec) -> Perm:
    q = F.size
    images = [0] * (q * q + 1)
    for a, b in product(range(q), repeat=2):
        images[1 + a + q * b] = 1 + F.frobenius(a, 1) + q * F.frobenius(b, 1)
    return tuple(images)


def sz(q: int) -> PermGroup:
    violation = thompson_violation(FamilyKey("SZ", q))
    if violation:
        raise InvalidInputError(f"Sz({q}): {violation}")
    F = _field_of(q)
    group = PermGroup(q * q + 1, sz_generators(F), name=f"Sz({q})")
    return _checked(group, q * q * (q - 1) * (q * q + 1))


# -----------------------------------------------------------------------------
# PG(2,3) and SL2(5)
# -----------------------------------------------------------------------------

def _normalized(v: Sequence[int], p: int) -> Tuple[int, ...]:
    lead = next(x for x in v if x % p)
    s = pow(lead, p - 2, p)
    return tuple((s * x) % p for x in v)


def _mat_vec(M: Sequence[Sequence[int]], v: Sequence[int], p: int) -> Tuple[int, ...]:
    return tuple(sum(M[i][j] * v[j] for j in range(len(v))) % p for i in range(len(M)))


@lru_cache(maxsize=None)
def projective_points(p: int, dim: int) -> Tuple[Tuple[int, ...], ...]:
    vectors = {_normalized(v, p) for v in product(range(p), repeat=dim) if any(v)}
    return tuple(sorted(vectors))


def projective_action(M: Sequence[Sequence[int]], p: int, dim: int) -> Perm:
    points = projective_points(p, dim)
    index = {v: i for i, v in enumerate(points)}
    return tuple(index[_normalized(_mat_vec(M, v, p), p)] for v in points)


def vector_action(M: Sequence[Sequence[int]], p: int, dim: int) -> Perm:
    vectors = [v for v in product(range(p), repeat=dim) if any(v)]
    index = {v: i for i, v in enumerate(vectors)}
    return tuple(index[_mat_vec(M, v, p)] for v in vectors)


def affine_action(M: Sequence[Sequence[int]], shift: Sequence[int], p: int, dim: int) -> Perm:
    vectors = list(product(range(p), repeat=dim))
    index = {v: i for i, v in enumerate(vectors)}
    return tuple(index[tuple((x + s) % p for x, s in zip(_mat_vec(M, v, p), shift))] for v in vectors)


def elementary_matrix(dim: int, i: int, j: int, value: int = 1) -> Matrix:
    return tuple(tuple((1 if r == c else 0) + (value if (r, c) == (i, j) else 0) for c in range(dim)) for r in range(dim))


def sl3_3_matrices() -> List[Matrix]:
    return [elementary_matrix(3, i, j) for i in range(3) for j in range(3) if i != j]


def l3_3() -> PermGroup:
    gens = [projective_action(M, 3, 3) for M in sl3_3_matrices()]
    return _checked(PermGroup(13, gens, name="L3(3)"), 5616)


@lru_cache(maxsize=None)
def pg23_lines() -> Tuple[Tuple[int, ...], ...]:
    """Lines of PG(2,3) as sorted point-index tuples, sorted."""
    points = projective_points(3, 3)
    lines = set()
    for dual in points:
        lines.add(tuple(i for i, v in enumerate(points) if sum(a * b for a, b in zip(dual, v)) % 3 == 0))
    return tuple(sorted(lines))


def _incidence_perm(point_perm: Perm) -> Perm:
    lines = pg23_lines()
    line_index = {line: i for i, line in enumerate(lines)}
    line_images = tuple(13 + line_index[tuple(sorted(point_perm[x] for x in line))] for line in lines)
    return tuple(point_perm) + line_images


def pg23_correlation() -> Perm:
    points = projective_points(3, 3)
    lines = pg23_lines()
    line_of_dual = {}
    for dual in points:
        members = tuple(i for i, v in enumerate(points) if sum(a * b for a, b in zip(dual, v)) % 3 == 0)
        line_of_dual[dual] = lines.index(members)
    images = [0] * 26
    for i, v in enumerate(points):
        j = line_of_dual[v]
        images[i] = 13 + j
        images[13 + j] = i
    return tuple(images)


def sl2_5() -> PermGroup:
    gens = [vector_action(((1, 1), (0, 1)), 5, 2), vector_action(((0, 4), (1, 0)), 5, 2)]
    return _checked(PermGroup(24, gens, name="SL2(5)"), 120)


# -----------------------------------------------------------------------------
# Automorphism groups
# -----------------------------------------------------------------------------

@dataclass
class EmbeddedSimple:
    key: FamilyKey
    ambient: PermGroup
    socle: Subgroup
    outer_reps: Tuple[Perm, ...]
    outer_names: Tuple[str, ...] = ()
    _transversal: List[Perm] = field(default_factory=list, repr=False)

    @property
    def outer_index(self) -> int:
        return self.ambient.order // simple_order(self.key)

    def transversal(self) -> List[Perm]:
        """Coset representatives of the socle in the ambient, identity first."""
        if not self._transversal:
            reps = [identity(self.ambient.degree)]
            frontier = list(reps)
            while frontier and len(reps) < self.outer_index:
                nxt = []
                for g in frontier:
                    for t in self.outer_reps:
                        h = mul(g, t)
                        if not any(self.socle.contains(mul(h, inverse(r))) for r in reps):
                            reps.append(h)
                            nxt.append(h)
                frontier = nxt
            self._transversal.extend(reps)
        return list(self._transversal)


def aut_embedding(key: FamilyKey) -> EmbeddedSimple:
    violation = thompson_violation(key)
    if violation:
        raise InvalidInputError(f"{key}: {violation}")
    q = key.q
    if key.family == "L3_3":
        socle_gens = [_incidence_perm(projective_action(M, 3, 3)) for M in sl3_3_matrices()]
        gamma = pg23_correlation()
        ambient = PermGroup(26, socle_gens + [gamma], name="Aut(L3(3))")
        outer, names = (gamma,), ("gamma",)
        expected = 2 * 5616
    elif key.family == "SZ":
        F = _field_of(q)
        socle_gens = sz_generators(F)
        phi = ovoid_frobenius(F)
        ambient = PermGroup(q * q + 1, socle_gens + [phi], name=f"Aut(Sz({q}))")
        outer, names = (phi,), ("phi",)
        expected = F.k * simple_order(key)
    else:
        F = _field_of(q)
        socle_gens = psl2_generators(F)
        delta = mobius(F, F.generator(), 0, 0, 1)
        phi = line_frobenius(F)
        if key.family == "L2_2P":
            outer, names = (phi,), ("phi",)
            expected = F.k * simple_order(key)
        elif key.family == "L2_3P":
            outer, names = (delta, phi), ("delta", "phi")
            expected = 2 * F.k * simple_order(key)
        else:
            outer, names = (delta,), ("delta",)
            expected = 2 * simple_order(key)
        ambient = PermGroup(q + 1, socle_gens + list(outer), name=f"Aut({key})")
    _checked(ambient, expected)
    socle = Subgroup(ambient, socle_gens)
    if socle.order != simple_order(key):
        raise ConstructionError(f"socle of {ambient.name} has order {socle.order}")
    logger.info(f"built {ambient.name}: degree {ambient.degree}, order {ambient.order}")
    return EmbeddedSimple(key, ambient, socle, outer, names)


def simple_group(key: FamilyKey) -> PermGroup:
    if key.family == "L3_3":
        return l3_3()
    if key.family == "SZ":
        return sz(key.q)
    return psl2(key.q)
