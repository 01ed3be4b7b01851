"""Permutation-group machinery.

A PermGroup wraps a sympy BSGS (order, membership, base). Subgroups are
materialised as numpy arrays of permutation rows, keyed by their images of
the parent's base points; every scan (normalizer, conjugacy, containment) is a
vectorised pass over the rows of a domain subgroup.

Convention: permutations compose left to right, ``mul(a, b)[i] = b[a[i]]``
(sympy's ``a * b``), and ``H^g = g^-1 H g``.
"""
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup

from pi_arith import PrimeSet, is_pi_number, pi_part, prime_support
from utils import (BudgetExceededError, CapExceededError, InvalidInputError,
                   SubmaxError, get_settings, logger)

Perm = Tuple[int, ...]

SCAN_CHUNK = 16384


# -----------------------------------------------------------------------------
# Row helpers
# -----------------------------------------------------------------------------

def identity(degree: int) -> Perm:
    return tuple(range(degree))


def mul(a: Sequence[int], b: Sequence[int]) -> Perm:
    return tuple(b[x] for x in a)


def inverse(a: Sequence[int]) -> Perm:
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


def check_perm(images: Sequence[int], degree: int) -> Perm:
    perm = tuple(int(x) for x in images)
    if len(perm) != degree or sorted(perm) != list(range(degree)):
        raise InvalidInputError(f"not a permutation of degree {degree}: {perm[:12]}...")
    return perm


def _as_rows(perms: Iterable[Sequence[int]], degree: int) -> np.ndarray:
    rows = np.array(list(perms), dtype=np.int32)
    return rows.reshape(-1, degree)


def inverse_rows(rows: np.ndarray) -> np.ndarray:
    inv = np.empty_like(rows)
    np.put_along_axis(inv, rows, np.broadcast_to(np.arange(rows.shape[1], dtype=rows.dtype), rows.shape), axis=1)
    return inv


def compose_rows(first: np.ndarray, then: np.ndarray) -> np.ndarray:
    """Row-wise product: apply ``first`` then ``then``."""
    return np.take_along_axis(then, first, axis=1)


def conjugate_rows(rows: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Rows of H^g for a single permutation g."""
    return g[rows[:, inverse_rows(g[None])[0]]]


def conjugates_of(h: np.ndarray, domain_rows: np.ndarray, domain_inv: np.ndarray) -> np.ndarray:
    """h^g for every g in the domain (row i belongs to domain_rows[i])."""
    return np.take_along_axis(domain_rows, h[domain_inv], axis=1)


def element_orders(rows: np.ndarray) -> np.ndarray:
    n_rows, degree = rows.shape
    if n_rows == 0:
        return np.zeros(0, dtype=np.int64)
    points = np.arange(degree, dtype=rows.dtype)
    cycle = np.zeros(rows.shape, dtype=np.int64)
    cur = rows.copy()
    step = 1
    while True:
        hit = (cur == points) & (cycle == 0)
        cycle[hit] = step
        if not (cycle == 0).any():
            break
        cur = np.take_along_axis(rows, cur, axis=1)
        step += 1
    return np.lcm.reduce(cycle, axis=1)


def power_rows(rows: np.ndarray, e: int) -> np.ndarray:
    result = np.broadcast_to(np.arange(rows.shape[1], dtype=rows.dtype), rows.shape).copy()
    base = rows
    while e:
        if e & 1:
            result = compose_rows(result, base)
        base = compose_rows(base, base)
        e >>= 1
    return result


def perm_order(perm: Sequence[int]) -> int:
    return int(element_orders(np.asarray(perm, dtype=np.int32)[None])[0])


# -----------------------------------------------------------------------------
# Groups
# -----------------------------------------------------------------------------

class PermGroup:
    """A permutation group with a sympy base and strong generating set."""

    def __init__(self, degree: int, generators: Iterable[Sequence[int]], name: str = ""):
        self.degree = degree
        self.name = name or f"G<{degree}>"
        gens = []
        for g in generators:
            perm = check_perm(g, degree)
            if perm != identity(degree) and perm not in gens:
                gens.append(perm)
        self.generators: Tuple[Perm, ...] = tuple(gens)
        sym_gens = [Permutation(list(g)) for g in gens] or [Permutation(list(identity(degree)))]
        self._sym = PermutationGroup(sym_gens)
        self._sym.schreier_sims()
        self.base: List[int] = list(self._sym.base) or [0]
        self.order: int = int(self._sym.order())
        if degree ** len(self.base) >= 2 ** 62:
            raise CapExceededError("base key width", degree ** len(self.base), 2 ** 62)
        self._weights = np.array([degree ** (len(self.base) - 1 - i) for i in range(len(self.base))], dtype=np.int64)
        self._whole: Optional["Subgroup"] = None
        logger.debug(f"{self.name}: degree {degree}, order {self.order}, base {self.base}")

    def keys(self, rows: np.ndarray) -> np.ndarray:
        return rows[:, self.base].astype(np.int64) @ self._weights

    def contains(self, perm: Sequence[int]) -> bool:
        return bool(self._sym.contains(Permutation(list(perm))))

    def whole(self) -> "Subgroup":
        if self._whole is None:
            self._whole = Subgroup.from_rows(self, self._materialize(), self.generators)
        return self._whole

    def _materialize(self) -> np.ndarray:
        cap = get_settings().cap_elements
        if self.order > cap:
            raise CapExceededError("materialization cap", self.order, cap)
        rows = np.arange(self.degree, dtype=np.int32)[None]
        transversals = self._sym.basic_transversals
        for level in reversed(range(len(transversals))):
            reps = _as_rows((u.array_form for _, u in sorted(transversals[level].items())), self.degree)
            rows = reps[:, rows].reshape(-1, self.degree)
        if len(rows) != self.order:
            raise SubmaxError(f"{self.name}: enumerated {len(rows)} elements, expected {self.order}")
        return rows

    def elements(self) -> List[Perm]:
        return sorted(map(tuple, self.whole().rows.tolist()))

    def subgroup(self, generators: Iterable[Sequence[int]], check: bool = True) -> "Subgroup":
        gens = [check_perm(g, self.degree) for g in generators]
        if check:
            for g in gens:
                if not self.contains(g):
                    raise InvalidInputError(f"generator {g[:12]}... not in {self.name}")
        return Subgroup(self, gens)

    def __repr__(self) -> str:
        return f"PermGroup({self.name}, degree={self.degree}, order={self.order})"


class Subgroup:
    """A subgroup of a parent PermGroup, materialised on demand."""

    def __init__(self, parent: PermGroup, generators: Iterable[Sequence[int]], limit: Optional[int] = None):
        self.parent = parent
        ident = identity(parent.degree)
        gens = []
        for g in generators:
            g = tuple(int(x) for x in g)
            if g != ident and g not in gens:
                gens.append(g)
        self.generators: Tuple[Perm, ...] = tuple(gens)
        self._rows: Optional[np.ndarray] = None
        self._keys: Optional[np.ndarray] = None
        self._limit = limit
        self._normalizers: Dict[int, tuple] = {}
        self._fingerprint = None
        self._order: Optional[int] = None

    @classmethod
    def from_rows(cls, parent: PermGroup, rows: np.ndarray, generators: Optional[Iterable[Sequence[int]]] = None) -> "Subgroup":
        keys = parent.keys(rows)
        order = np.argsort(keys, kind="stable")
        sub = cls(parent, generators if generators is not None else [])
        sub._rows = np.ascontiguousarray(rows[order])
        sub._keys = keys[order]
        if parent.order % len(sub._keys):
            raise SubmaxError(f"Lagrange violated: {len(sub._keys)} does not divide {parent.order}")
        if generators is None:
            sub.generators = tuple(sub._greedy_generators())
        return sub

    @classmethod
    def trivial(cls, parent: PermGroup) -> "Subgroup":
        return cls.from_rows(parent, np.arange(parent.degree, dtype=np.int32)[None], [])

    # --- materialisation ---
    def _close(self) -> None:
        degree = self.parent.degree
        cap = self._limit or get_settings().cap_elements
        rows = np.arange(degree, dtype=np.int32)[None]
        keys = self.parent.keys(rows)
        seen = set(keys.tolist())
        frontier = rows
        blocks = [rows]
        gens = _as_rows(self.generators, degree) if self.generators else np.zeros((0, degree), dtype=np.int32)
        while len(frontier) and len(gens):
            new = np.concatenate([g[frontier] for g in gens])
            new_keys = self.parent.keys(new)
            new_keys, first = np.unique(new_keys, return_index=True)
            fresh = np.array([k not in seen for k in new_keys.tolist()], dtype=bool)
            frontier = new[first[fresh]]
            seen.update(new_keys[fresh].tolist())
            blocks.append(frontier)
            if len(seen) > cap:
                raise CapExceededError("materialization cap", len(seen), cap)
        rows = np.concatenate(blocks)
        keys = self.parent.keys(rows)
        order = np.argsort(keys, kind="stable")
        self._rows = np.ascontiguousarray(rows[order])
        self._keys = keys[order]
        if self.parent.order % len(self._keys):
            raise SubmaxError(f"Lagrange violated: {len(self._keys)} does not divide {self.parent.order}")

    @property
    def rows(self) -> np.ndarray:
        if self._rows is None:
            self._close()
        return self._rows

    @property
    def keys(self) -> np.ndarray:
        if self._keys is None:
            self._close()
        return self._keys

    @property
    def order(self) -> int:
        """Order without materialising (sympy BSGS) unless already materialised."""
        if self._keys is not None:
            return len(self._keys)
        if self._order is None:
            sym = PermutationGroup([Permutation(list(g)) for g in self.generators]
                                   or [Permutation(list(identity(self.parent.degree)))])
            self._order = int(sym.order())
        return self._order

    @property
    def signature(self) -> bytes:
        return self.keys.tobytes()

    def _greedy_generators(self) -> List[Perm]:
        gens: List[Perm] = []
        current = Subgroup.trivial(self.parent)
        # largest element orders first keeps generating sets short
        orders = element_orders(self._rows)
        for idx in np.lexsort((self._keys, -orders)):
            if len(current.keys) == len(self._keys):
                break
            if current.contains_key(int(self._keys[idx])):
                continue
            gens.append(tuple(self._rows[idx].tolist()))
            current = Subgroup(self.parent, gens)
            current._close()
        return gens

    # --- membership ---
    def contains_key(self, key: int) -> bool:
        i = np.searchsorted(self.keys, key)
        return i < len(self.keys) and self.keys[i] == key

    def contains_keys(self, keys: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.keys, keys)
        idx = np.minimum(idx, len(self.keys) - 1)
        return self.keys[idx] == keys

    def contains(self, perm: Sequence[int]) -> bool:
        return self.contains_key(int(self.parent.keys(np.asarray(perm, dtype=np.int32)[None])[0]))

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return bool(other.contains_keys(self.keys).all())

    def index_of_keys(self, keys: np.ndarray) -> np.ndarray:
        return np.searchsorted(self.keys, keys)

    # --- derived objects ---
    def conjugate(self, g: Sequence[int]) -> "Subgroup":
        g = np.asarray(g, dtype=np.int32)
        gens = conjugate_rows(_as_rows(self.generators, self.parent.degree), g) if self.generators else []
        return Subgroup.from_rows(self.parent, conjugate_rows(self.rows, g), [tuple(r) for r in np.asarray(gens).tolist()])

    def intersection(self, other: "Subgroup") -> "Subgroup":
        mask = other.contains_keys(self.keys)
        return Subgroup.from_rows(self.parent, self.rows[mask])

    def join(self, other: "Subgroup", limit: Optional[int] = None) -> "Subgroup":
        return Subgroup(self.parent, self.generators + other.generators, limit=limit)

    def inverse_rows(self) -> np.ndarray:
        if not hasattr(self, "_inv"):
            self._inv = inverse_rows(self.rows)
        return self._inv

    def fingerprint(self) -> tuple:
        """Conjugation-invariant: order, element-order histogram, orbit lengths, abelian flag."""
        if self._fingerprint is None:
            self._fingerprint = (
                len(self.keys),
                tuple(sorted(element_order_histogram(self).items())),
                tuple(sorted(orbit_lengths(self))),
                is_abelian(self),
            )
        return self._fingerprint

    def perms(self) -> List[Perm]:
        return [tuple(r) for r in self.rows.tolist()]

    def __len__(self) -> int:
        return len(self.keys)

    def __repr__(self) -> str:
        size = len(self._keys) if self._keys is not None else "?"
        return f"Subgroup(order={size}, gens={len(self.generators)})"


@dataclass
class ConjClass:
    representative: Subgroup
    class_size: int

    @property
    def order(self) -> int:
        return len(self.representative)


def bsgs_from_generators(degree: int, gens: Iterable[Sequence[int]], name: str = "") -> PermGroup:
    return PermGroup(degree, gens, name)


def elements(group) -> List[Perm]:
    if isinstance(group, PermGroup):
        return group.elements()
    return sorted(group.perms())


def as_domain(group) -> Subgroup:
    return group.whole() if isinstance(group, PermGroup) else group


# -----------------------------------------------------------------------------
# Structure of a materialised subgroup
# -----------------------------------------------------------------------------

def orbit_lengths(H: Subgroup) -> List[int]:
    degree = H.parent.degree
    parent_of = list(range(degree))

    def find(x):
        while parent_of[x] != x:
            parent_of[x] = parent_of[parent_of[x]]
            x = parent_of[x]
        return x

    for g in H.generators:
        for x, y in enumerate(g):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent_of[rx] = ry
    sizes: Dict[int, int] = defaultdict(int)
    for x in range(degree):
        sizes[find(x)] += 1
    return list(sizes.values())


def is_abelian(H: Subgroup) -> bool:
    gens = H.generators
    return all(mul(a, b) == mul(b, a) for i, a in enumerate(gens) for b in gens[i + 1:])


def element_order_histogram(H: Subgroup) -> Dict[int, int]:
    values, counts = np.unique(element_orders(H.rows), return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def exponent(H: Subgroup) -> int:
    return int(np.lcm.reduce(element_orders(H.rows)))


def center(H: Subgroup) -> Subgroup:
    rows = H.rows
    mask = np.ones(len(rows), dtype=bool)
    for g in H.generators:
        g = np.asarray(g, dtype=np.int32)
        mask &= (g[rows] == rows[:, g]).all(axis=1)
    return Subgroup.from_rows(H.parent, rows[mask])


def centralizer_in(H: Subgroup, X: Subgroup) -> Subgroup:
    """Elements of H commuting with every element of X."""
    rows = H.rows
    mask = np.ones(len(rows), dtype=bool)
    for g in X.generators:
        g = np.asarray(g, dtype=np.int32)
        mask &= (g[rows] == rows[:, g]).all(axis=1)
    return Subgroup.from_rows(H.parent, rows[mask])


def commutator(a: Sequence[int], b: Sequence[int]) -> Perm:
    return mul(mul(inverse(a), inverse(b)), mul(a, b))


def normal_closure(H: Subgroup, gens: Iterable[Sequence[int]]) -> Subgroup:
    N = Subgroup(H.parent, list(gens))
    changed = True
    while changed:
        changed = False
        for n in list(N.generators):
            for h in H.generators:
                c = mul(mul(inverse(h), n), h)
                if not N.contains(c):
                    N = Subgroup(H.parent, N.generators + (c,))
                    changed = True
    return N if N._keys is not None else Subgroup.from_rows(H.parent, N.rows, N.generators)


def derived_subgroup(H: Subgroup) -> Subgroup:
    gens = H.generators
    comms = [commutator(a, b) for i, a in enumerate(gens) for b in gens[i + 1:]]
    return normal_closure(H, comms)


def cayley_table(H: Subgroup) -> np.ndarray:
    """table[i, j] = index of rows[i] * rows[j] (rows[i] applied first)."""
    rows = H.rows
    table = np.empty((len(rows), len(rows)), dtype=np.int32)
    for i, a in enumerate(rows):
        table[i] = H.index_of_keys(H.parent.keys(rows[:, a]))
    return table


# -----------------------------------------------------------------------------
# Scans over a domain
# -----------------------------------------------------------------------------

def _scan_mask(domain: Subgroup, gens: Sequence[Perm], target: Subgroup) -> np.ndarray:
    """mask[i] iff every generator conjugated by domain element i lies in target."""
    rows, inv = domain.rows, domain.inverse_rows()
    mask = np.ones(len(rows), dtype=bool)
    for start in range(0, len(rows), SCAN_CHUNK):
        stop = start + SCAN_CHUNK
        chunk = mask[start:stop]
        for h in gens:
            if not chunk.any():
                break
            h = np.asarray(h, dtype=np.int32)
            live = np.nonzero(chunk)[0]
            conj = conjugates_of(h, rows[start:stop][live], inv[start:stop][live])
            chunk[live] = target.contains_keys(domain.parent.keys(conj))
    return mask


def normalizer(group, H: Subgroup) -> Subgroup:
    domain = as_domain(group)
    cached = H._normalizers.get(id(domain))
    if cached is not None and cached[0] is domain:
        return cached[1]
    rows = domain.rows[_scan_mask(domain, H.generators, H)]
    N = Subgroup.from_rows(domain.parent, rows)
    H._normalizers[id(domain)] = (domain, N)
    return N


def are_conjugate(group, H1: Subgroup, H2: Subgroup) -> Optional[Perm]:
    if len(H1) != len(H2) or H1.fingerprint() != H2.fingerprint():
        return None
    if H1.signature == H2.signature:
        return identity(H1.parent.degree)
    domain = as_domain(group)
    hits = np.nonzero(_scan_mask(domain, H1.generators, H2))[0]
    return tuple(domain.rows[hits[0]].tolist()) if len(hits) else None


def conjugate_into(group, H: Subgroup, K: Subgroup) -> Optional[Perm]:
    """Some g in the domain with H^g <= K, or None."""
    if len(K) % len(H):
        return None
    if H.is_subgroup_of(K):
        return identity(H.parent.degree)
    domain = as_domain(group)
    hits = np.nonzero(_scan_mask(domain, H.generators, K))[0]
    return tuple(domain.rows[hits[0]].tolist()) if len(hits) else None


def class_size(group, H: Subgroup) -> int:
    domain = as_domain(group)
    return len(domain) // len(normalizer(domain, H))


def conjugates(group, H: Subgroup) -> List[Subgroup]:
    """All distinct conjugates H^g, g running over a right transversal of N(H)."""
    domain = as_domain(group)
    N = normalizer(domain, H)
    visited = np.zeros(len(domain), dtype=bool)
    result = []
    for i in range(len(domain)):
        if visited[i]:
            continue
        g = domain.rows[i]
        result.append(H.conjugate(g))
        coset = g[N.rows]
        visited[domain.index_of_keys(domain.parent.keys(coset))] = True
    return result


def is_normal(group, N: Subgroup) -> bool:
    domain = as_domain(group)
    for g in domain.generators:
        g = np.asarray(g, dtype=np.int32)
        conj = conjugate_rows(_as_rows(N.generators, N.parent.degree), g) if N.generators else None
        if conj is not None and not N.contains_keys(N.parent.keys(conj)).all():
            return False
    return True


def is_pronormal(group, H: Subgroup) -> bool:
    """H and H^g conjugate in <H, H^g> for every g, one g per N(H)-orbit of conjugates."""
    domain = as_domain(group)
    N = normalizer(domain, H)
    done = {H.signature}
    for C in conjugates(domain, H):
        if C.signature in done:
            continue
        orbit = [C]
        done.add(C.signature)
        for D in orbit:
            for n in N.generators:
                E = D.conjugate(n)
                if E.signature not in done:
                    done.add(E.signature)
                    orbit.append(E)
        J = H.join(C)
        if J.order == len(domain):
            continue
        if are_conjugate(J, H, C) is None:
            return False
    return True


# -----------------------------------------------------------------------------
# Sylow, π-subgroups, maximal subgroups
# -----------------------------------------------------------------------------

def sylow_subgroup(group, p: int) -> Subgroup:
    """A Sylow p-subgroup; a bare PermGroup is handled by sympy without materialising."""
    if isinstance(group, PermGroup):
        parent, order, gens = group, group.order, group.generators
    else:
        parent, order, gens = group.parent, len(group), group.generators
    if order % p:
        return Subgroup.trivial(parent)
    sym = PermutationGroup([Permutation(list(g)) for g in gens])
    P = sym.sylow_subgroup(p)
    sub = Subgroup(parent, [tuple(g.array_form) for g in P.generators])
    if sub.order != pi_part(order, PrimeSet((p,))):
        raise SubmaxError(f"Sylow {p}-subgroup of order {sub.order} in a group of order {order}")
    return sub


def _extensions(domain: Subgroup, H: Subgroup, pi: PrimeSet) -> List[Subgroup]:
    """Subgroups <H, x> with x in N(H), x^p in H for a prime p in pi, x outside H.

    Every solvable group K > 1 has a normal subgroup of prime index, so
    K = <H, x> for such a pair; layering by |H| therefore reaches every
    solvable pi-subgroup up to conjugacy. One x per N(H)-class suffices.
    """
    N = normalizer(domain, H)
    index = len(N) // len(H)
    outside = ~H.contains_keys(N.keys)
    n_inv = N.inverse_rows()
    found: List[Subgroup] = []
    for p in pi:
        if index % p:
            continue
        powers = power_rows(N.rows, p)
        pending = outside & H.contains_keys(domain.parent.keys(powers))
        for idx in np.nonzero(pending)[0]:
            if not pending[idx]:
                continue
            x = N.rows[idx]
            blocks, xi = [], np.arange(domain.parent.degree, dtype=np.int32)
            for _ in range(p):
                blocks.append(xi[H.rows])
                xi = x[xi]
            K = Subgroup.from_rows(domain.parent, np.concatenate(blocks), H.generators + (tuple(x.tolist()),))
            found.append(K)
            pending &= ~K.contains_keys(N.keys)
            pending[N.index_of_keys(domain.parent.keys(conjugates_of(x, N.rows, n_inv)))] = False
    return found


def _dedupe(domain: Subgroup, candidates: List[Subgroup], known: List[Subgroup]) -> List[Subgroup]:
    buckets: Dict[tuple, List[Subgroup]] = defaultdict(list)
    for K in known:
        buckets[K.fingerprint()].append(K)
    fresh = []
    for K in candidates:
        bucket = buckets[K.fingerprint()]
        if any(K.signature == R.signature for R in bucket):
            continue
        if any(are_conjugate(domain, K, R) is not None for R in bucket):
            continue
        bucket.append(K)
        fresh.append(K)
    return fresh


def pi_subgroup_classes(group, pi: PrimeSet, workers: int = 1) -> List[ConjClass]:
    """One representative per conjugacy class of (solvable) pi-subgroups."""
    domain = as_domain(group)
    parent = domain.parent
    layer = [Subgroup.trivial(parent)]
    reps = list(layer)
    while layer:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                batches = list(pool.map(lambda H: _extensions(domain, H, pi), layer))
        else:
            batches = [_extensions(domain, H, pi) for H in layer]
        candidates = [K for batch in batches for K in batch]
        layer = _dedupe(domain, candidates, reps)
        reps.extend(layer)
        logger.debug(f"pi-subgroup layer: {len(candidates)} candidates, {len(layer)} new classes")
    if is_pi_number(len(domain), pi) and not any(len(R) == len(domain) for R in reps):
        reps.append(domain)
    reps.sort(key=lambda R: (len(R), R.fingerprint()))
    return [ConjClass(R, class_size(domain, R)) for R in reps]


def _maximal_by_containment(domain: Subgroup, classes: List[ConjClass], allow_whole: bool) -> List[ConjClass]:
    ordered = sorted(classes, key=lambda c: -c.order)
    maximal: List[ConjClass] = []
    for c in ordered:
        if not allow_whole and c.order == len(domain):
            continue
        H = c.representative
        if any(M.order > c.order and conjugate_into(domain, H, M.representative) is not None for M in maximal):
            continue
        maximal.append(c)
    return sorted(maximal, key=lambda c: (c.order, c.representative.fingerprint()))


def pi_maximal_classes(group, pi: PrimeSet, workers: int = 1) -> List[ConjClass]:
    domain = as_domain(group)
    if is_pi_number(len(domain), pi):
        return [ConjClass(domain, 1)]
    classes = pi_subgroup_classes(domain, pi, workers)
    # no pi-element of N(H) outside H is necessary for pi-maximality, not sufficient
    survivors = [c for c in classes
                 if pi_part(len(normalizer(domain, c.representative)) // c.order, pi) == 1]
    return _maximal_by_containment(domain, survivors, allow_whole=True)


def maximal_subgroup_classes(group, workers: int = 1) -> List[ConjClass]:
    domain = as_domain(group)
    classes = pi_subgroup_classes(domain, prime_support(len(domain)), workers)
    return _maximal_by_containment(domain, classes, allow_whole=False)


def intersection_of_conjugates(group, reps: Iterable[Subgroup]) -> Subgroup:
    domain = as_domain(group)
    keys = domain.keys
    for R in reps:
        for C in conjugates(domain, R):
            keys = np.intersect1d(keys, C.keys, assume_unique=True)
    return Subgroup.from_rows(domain.parent, domain.rows[np.isin(domain.keys, keys)])


def fitting_subgroup(group) -> Subgroup:
    domain = as_domain(group)
    gens: List[Perm] = []
    for p in prime_support(len(domain)):
        O_p = intersection_of_conjugates(domain, [sylow_subgroup(domain, p)])
        gens.extend(O_p.generators)
    F = Subgroup(domain.parent, gens)
    return Subgroup.from_rows(domain.parent, F.rows, F.generators)


def frattini_subgroup(group) -> Subgroup:
    domain = as_domain(group)
    reps = [c.representative for c in maximal_subgroup_classes(domain)]
    if not reps:
        return Subgroup.trivial(domain.parent)
    return intersection_of_conjugates(domain, reps)


# -----------------------------------------------------------------------------
# Quotients
# -----------------------------------------------------------------------------

class QuotientMap:
    """The action of a group on the right cosets of a normal subgroup."""

    def __init__(self, group, N: Subgroup):
        domain = as_domain(group)
        if not is_normal(domain, N):
            raise InvalidInputError("quotient by a subgroup that is not normal")
        self.domain, self.kernel = domain, N
        coset_of = np.full(len(domain), -1, dtype=np.int64)
        reps = []
        for i in range(len(domain)):
            if coset_of[i] >= 0:
                continue
            g = domain.rows[i]
            coset_of[domain.index_of_keys(domain.parent.keys(g[N.rows]))] = len(reps)
            reps.append(g)
        self._coset_of = coset_of
        self._reps = np.array(reps, dtype=np.int32)
        gens = [self.image_of(g) for g in domain.generators]
        self.group = PermGroup(len(reps), gens, name=f"quotient<{len(reps)}>")
        if self.group.order * len(N) != len(domain):
            raise SubmaxError("coset action is not faithful on the quotient")

    def image_of(self, g: Sequence[int]) -> Perm:
        g = np.asarray(g, dtype=np.int32)
        moved = g[self._reps]
        return tuple(self._coset_of[self.domain.index_of_keys(self.domain.parent.keys(moved))].tolist())

    def image(self, H: Subgroup) -> Subgroup:
        return Subgroup(self.group, [self.image_of(g) for g in H.generators])

    def preimage(self, Hbar: Subgroup) -> Subgroup:
        images = np.array([self.image_of(g) for g in self.domain.rows], dtype=np.int32)
        mask = Hbar.contains_keys(self.group.keys(images))
        return Subgroup.from_rows(self.domain.parent, self.domain.rows[mask])


def quotient_group(group, N: Subgroup) -> QuotientMap:
    return QuotientMap(group, N)


# -----------------------------------------------------------------------------
# Orbit-stabiliser searches for groups beyond the cap
# -----------------------------------------------------------------------------

class StepBudget:
    def __init__(self, limit: Optional[int] = None, what: str = "search"):
        self.limit = limit or get_settings().budget_steps
        self.used = 0
        self.what = what

    def spend(self, steps: int = 1) -> None:
        self.used += steps
        if self.used > self.limit:
            raise BudgetExceededError(self.what, self.used)


def _stabilizer_by_orbit(G: PermGroup, start, act: Callable, sig: Callable, seed: Subgroup, budget: StepBudget) -> Tuple[int, Subgroup]:
    """Orbit of ``start`` under G.generators and its stabiliser, built from
    Schreier generators on top of ``seed`` until the orbit-stabiliser order is met."""
    degree = G.degree
    gens = _as_rows(G.generators, degree)
    ident = np.arange(degree, dtype=np.int32)
    transversal: Dict[bytes, np.ndarray] = {sig(start): ident}
    frontier = [(start, ident)]
    while frontier:
        nxt = []
        for obj, t in frontier:
            for s in gens:
                budget.spend()
                image = act(obj, s)
                key = sig(image)
                if key not in transversal:
                    transversal[key] = s[t]
                    nxt.append((image, s[t]))
        frontier = nxt
    orbit = len(transversal)
    target = G.order // orbit
    stab = seed
    if len(stab) == target:
        return orbit, stab
    for key, t in transversal.items():
        obj = act(start, t)
        for s in gens:
            budget.spend()
            u = s[t]
            back = inverse_rows(transversal[sig(act(obj, s))][None])[0]
            schreier = back[u]
            if stab.contains(schreier):
                continue
            stab = Subgroup(G, stab.generators + (tuple(schreier.tolist()),), limit=target)
            stab._close()
            if len(stab) == target:
                return orbit, stab
    raise SubmaxError("stabiliser generation did not reach the orbit-stabiliser order")


def normalizer_by_orbit(G: PermGroup, H: Subgroup, budget: Optional[StepBudget] = None) -> Subgroup:
    budget = budget or StepBudget(what="normalizer orbit")
    _, N = _stabilizer_by_orbit(
        G, H.rows,
        act=lambda rows, s: conjugate_rows(rows, s),
        sig=lambda rows: np.sort(G.keys(rows)).tobytes(),
        seed=H, budget=budget)
    return N


def centralizer_by_orbit(G: PermGroup, g: Sequence[int], budget: Optional[StepBudget] = None) -> Subgroup:
    budget = budget or StepBudget(what="centralizer orbit")
    g = np.asarray(g, dtype=np.int32)
    _, C = _stabilizer_by_orbit(
        G, g[None],
        act=lambda rows, s: conjugate_rows(rows, s),
        sig=lambda rows: rows.tobytes(),
        seed=Subgroup(G, [tuple(g.tolist())]), budget=budget)
    return C
