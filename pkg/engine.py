"""Verification engine: recomputes the pi-submaximal classes of a simple group
inside an explicit Aut(S) and compares them with the oracle.

Two tiers:
  - FULL materialises Aut(S), enumerates its pi-maximal classes and intersects
    them with the socle.
  - TARGETED builds only the subgroups a row names (L2 families) and checks
    them with orbit-stabiliser searches, so no global enumeration is needed.
"""
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from groups import EmbeddedSimple, LineSubgroups, aut_embedding, simple_group
from oracle import (FUSED_BY_OUTER, INVARIANT, CaseKey, ClassifyResult, SubmaxRecord,
                    aut_maximal_exceptions, classify, maximal_subgroups_table)
from permgroup import (PermGroup, StepBudget, Subgroup, QuotientMap, are_conjugate,
                       centralizer_by_orbit, conjugate_into, element_orders, fitting_subgroup,
                       is_pronormal, maximal_subgroup_classes, normalizer, normalizer_by_orbit,
                       pi_maximal_classes, sylow_subgroup)
from pi_arith import FamilyKey, PrimeSet, pi_part, prime_support, simple_order
from structid import IDENTIFY_LIMIT, StructureDescriptor, dihedral, identify, named, normalize, whole
from utils import BudgetExceededError, CapExceededError, InvalidInputError, logger

FULL = "full"
TARGETED = "targeted"
TIERS = (FULL, TARGETED)
TARGETED_FAMILIES = ("L2_2P", "L2_3P", "L2_PRIME")

MATCH = "MATCH"
MISMATCH = "MISMATCH"
INCONCLUSIVE = "INCONCLUSIVE"

# simple groups small enough to serve as the quotient in the Fitting reduction
SMALL_SIMPLE = (FamilyKey("L2_2P", 4), FamilyKey("L2_PRIME", 7), FamilyKey("L2_2P", 8),
                FamilyKey("L2_PRIME", 13), FamilyKey("L2_PRIME", 17))


@dataclass
class VerifiedClass:
    representative: Subgroup
    descriptor: StructureDescriptor
    class_size: int
    pi_maximal_in_socle: bool
    pronormal: Optional[bool]
    intravariant: bool
    wh_index: int
    container: Optional[StructureDescriptor] = None
    orbit: int = 0

    def to_dict(self) -> dict:
        return {
            "descriptor": self.descriptor.to_dict(),
            "order": len(self.representative),
            "class_size": self.class_size,
            "pi_maximal": self.pi_maximal_in_socle,
            "container": self.container.to_dict() if self.container else None,
            "pronormal": self.pronormal,
            "intravariant": self.intravariant,
            "wh_index": self.wh_index,
            "orbit": self.orbit,
            "generators": [list(g) for g in self.representative.generators],
        }


@dataclass
class Report:
    label: str
    tier: str
    verdict: str = MATCH
    case: Optional[CaseKey] = None
    records: Tuple[SubmaxRecord, ...] = ()
    classes: List[VerifiedClass] = field(default_factory=list)
    details: List[str] = field(default_factory=list)
    seconds: float = 0.0

    def fail(self, message: str) -> None:
        self.verdict = MISMATCH
        self.details.append(message)
        logger.warning(f"{self.label}: {message}")

    def note(self, message: str) -> None:
        self.details.append(message)
        logger.info(f"{self.label}: {message}")

    @property
    def ok(self) -> bool:
        return self.verdict == MATCH

    def to_dict(self) -> dict:
        payload = {"label": self.label, "tier": self.tier, "verdict": self.verdict,
                   "details": list(self.details),
                   "records": [r.to_dict() for r in self.records],
                   "classes": [c.to_dict() for c in self.classes]}
        if self.case is not None:
            payload.update(self.case.to_dict())
        return payload


# -----------------------------------------------------------------------------
# Brute-force submaximal classes
# -----------------------------------------------------------------------------

def _dedupe_in(S: Subgroup, candidates: Sequence[Subgroup]) -> List[Subgroup]:
    reps: List[Subgroup] = []
    for H in candidates:
        if not any(len(R) == len(H) and are_conjugate(S, H, R) is not None for R in reps):
            reps.append(H)
    return reps


def _class_index(S: Subgroup, reps: Sequence[Subgroup], H: Subgroup) -> int:
    for i, R in enumerate(reps):
        if len(R) == len(H) and are_conjugate(S, H, R) is not None:
            return i
    raise InvalidInputError("image of a submaximal class is not submaximal")


def _fusion_orbits(emb: EmbeddedSimple, reps: Sequence[Subgroup]) -> Tuple[List[int], List[bool]]:
    """Orbit id per class under the outer representatives, and whether each
    class is fixed by all of them."""
    parent = list(range(len(reps)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    fixed = [True] * len(reps)
    for i, H in enumerate(reps):
        for a in emb.outer_reps:
            j = _class_index(emb.socle, reps, H.conjugate(a))
            if j != i:
                fixed[i] = False
                parent[find(i)] = find(j)
    roots = sorted({find(i) for i in range(len(reps))})
    return [roots.index(find(i)) for i in range(len(reps))], fixed


def submaximal_classes(emb: EmbeddedSimple, pi: PrimeSet, workers: int = 1) -> List[VerifiedClass]:
    """The socle classes of K n S for K pi-maximal in the ambient Aut(S)."""
    S = emb.socle
    order = simple_order(emb.key)
    if prime_support(order).issubset(pi):
        return [VerifiedClass(S, whole(order), 1, True, True, True, 1)]
    candidates = []
    for c in pi_maximal_classes(emb.ambient, pi, workers):
        H0 = c.representative.intersection(S)
        candidates.extend(H0.conjugate(t) for t in emb.transversal())
    reps = _dedupe_in(S, candidates)
    reps.sort(key=lambda R: (-len(R), R.fingerprint()))
    logger.info(f"{emb.key} pi={pi}: {len(reps)} submaximal classes")

    descriptors = [identify(R) for R in reps]
    orbits, fixed = _fusion_orbits(emb, reps)
    result = []
    maximal: List[int] = []
    for i, H in enumerate(reps):
        # reps run by decreasing order, so every larger pi-maximal class is known
        holders = [j for j in maximal
                   if len(reps[j]) > len(H) and conjugate_into(S, H, reps[j]) is not None]
        container = None
        if holders:
            best = min(holders, key=lambda j: (len(reps[j]), str(descriptors[j])))
            container = descriptors[best]
        else:
            maximal.append(i)
        N = normalizer(S, H)
        result.append(VerifiedClass(
            representative=H,
            descriptor=descriptors[i],
            class_size=order // len(N),
            pi_maximal_in_socle=not holders,
            pronormal=is_pronormal(S, H),
            intravariant=fixed[i],
            wh_index=len(N) // len(H),
            container=container,
            orbit=orbits[i],
        ))
    return result


def _orbit_rows(classes: Sequence[VerifiedClass]) -> List[tuple]:
    by_orbit: Dict[int, List[VerifiedClass]] = {}
    for c in classes:
        by_orbit.setdefault(c.orbit, []).append(c)
    rows = []
    for members in by_orbit.values():
        c = members[0]
        ncc = len(members)
        rows.append((str(c.descriptor), ncc, FUSED_BY_OUTER if ncc > 1 else INVARIANT,
                     c.pi_maximal_in_socle, str(c.container) if c.container else "", c.intravariant))
    return sorted(rows)


def _record_rows(records: Sequence[SubmaxRecord]) -> List[tuple]:
    return sorted((str(r.descriptor), r.ncc, r.aut_action, r.pi_maximal,
                   str(r.container) if r.container else "", r.intravariant) for r in records)


# -----------------------------------------------------------------------------
# FULL tier
# -----------------------------------------------------------------------------

def _verify_full(report: Report, result: ClassifyResult, workers: int) -> None:
    case = result.case
    emb = aut_embedding(case.family_key)
    classes = submaximal_classes(emb, case.pi, workers)
    report.classes = classes
    expected, found = _record_rows(result.records), _orbit_rows(classes)
    missing = Counter(expected) - Counter(found)
    extra = Counter(found) - Counter(expected)
    for row in sorted(missing):
        report.fail(f"oracle row not found: {row}")
    for row in sorted(extra):
        report.fail(f"computed class not in the oracle: {row}")
    for c in classes:
        if not c.pronormal:
            report.fail(f"{c.descriptor} is not pronormal in the socle")
        if pi_part(c.wh_index, case.pi) != 1:
            report.fail(f"{c.descriptor}: |N(H):H| = {c.wh_index} is not a pi'-number")


# -----------------------------------------------------------------------------
# TARGETED tier
# -----------------------------------------------------------------------------

def _targeted_generators(lines: LineSubgroups, G: PermGroup, case: CaseKey, record: SubmaxRecord) -> List[tuple]:
    source, n = record.source, record.order
    if source == "trivial":
        return []
    if source == "whole":
        return list(G.generators)
    if source == "sylow":
        p = prime_support(n).primes[0]
        return list(sylow_subgroup(G, p).generators)
    if source == "borel":
        return lines.borel(n // lines.q)
    if source in ("torus+", "torus-"):
        sign = 1 if source == "torus+" else -1
        if 2 in case.pi:
            return lines.torus(sign, n // 2, with_involution=True)
        return lines.torus(sign, n, with_involution=False)
    if source == "alt4":
        return lines.alt4()
    if source == "sym4":
        return lines.sym4()
    raise InvalidInputError(f"no targeted recipe for a {source!r} row")


def _klein_fours(H: Subgroup) -> List[Subgroup]:
    rows = H.rows
    invols = [tuple(r.tolist()) for r, o in zip(rows, element_orders(rows)) if o == 2]
    fours = []
    for i, a in enumerate(invols):
        for b in invols[i + 1:]:
            V = Subgroup(H.parent, [a, b])
            if V.order == 4 and not any(V.signature == W.signature for W in fours):
                fours.append(V)
    return fours


def find_sym4_over(G: PermGroup, H: Subgroup, budget: Optional[StepBudget] = None) -> Optional[Subgroup]:
    """An S4 of G containing H, by adjoining an element of order at most 4
    taken from the centraliser of an involution of H or the normaliser of a
    Klein four subgroup of H."""
    budget = budget or StepBudget(what="S4 generator search")
    rows = H.rows
    # each orbit search runs on its own budget
    pools = [normalizer_by_orbit(G, V) for V in _klein_fours(H)]
    pools.extend(centralizer_by_orbit(G, tuple(r.tolist()))
                 for r, o in zip(rows, element_orders(rows)) if o == 2)
    for pool in pools:
        if len(pool) > IDENTIFY_LIMIT:
            continue
        for y, o in zip(pool.rows, element_orders(pool.rows)):
            budget.spend()
            y = tuple(y.tolist())
            if o > 4 or H.contains(y):
                continue
            try:
                J = Subgroup(G, H.generators + (y,), limit=24)
                if J.order == 24 and identify(J) == named("SYM4"):
                    return J
            except CapExceededError:
                continue
    return None


def _verify_targeted(report: Report, result: ClassifyResult) -> None:
    case = result.case
    key, pi = case.family_key, case.pi
    G = simple_group(key)
    lines = LineSubgroups(key.q)
    report.note("class counts are taken from the oracle; the targeted tier does not recount them")
    for record in result.records:
        label = f"{record.table} row {record.row} {record.descriptor}"
        gens = _targeted_generators(lines, G, case, record)
        missing = [g for g in gens if not G.contains(g)]
        if missing:
            report.fail(f"{label}: a generator lies outside {key}")
            continue
        H = Subgroup(G, gens)
        if H.order != record.order:
            report.fail(f"{label}: constructed order {H.order}, expected {record.order}")
            continue
        if record.source != "whole" and record.order <= IDENTIFY_LIMIT:
            descriptor = identify(H)
            if descriptor != normalize(record.descriptor):
                report.fail(f"{label}: constructed subgroup is {descriptor}")
                continue
        else:
            descriptor = record.descriptor
        if record.source == "whole":
            wh = 1
        else:
            N = normalizer_by_orbit(G, H)
            wh = N.order // H.order
        if pi_part(wh, pi) != 1:
            report.fail(f"{label}: |N(H):H| = {wh} has a pi-part")
        container = None
        if record.container is not None:
            if record.container != named("SYM4"):
                report.fail(f"{label}: no targeted search for a {record.container} container")
                continue
            J = find_sym4_over(G, H)
            if J is None:
                report.fail(f"{label}: no S4 over H was found")
                continue
            container = named("SYM4")
            report.note(f"{label}: contained in an S4 generated by {len(J.generators)} elements")
        elif 2 in pi and 3 in pi and descriptor in (dihedral(6), dihedral(8)):
            # an S4 over H would be a larger pi-subgroup
            if find_sym4_over(G, H) is not None:
                report.fail(f"{label}: listed as pi-maximal but an S4 over H exists")
                continue
            report.note(f"{label}: no S4 over H, pi-maximal")
        report.classes.append(VerifiedClass(
            representative=H,
            descriptor=descriptor,
            class_size=G.order // (H.order * wh),
            pi_maximal_in_socle=container is None,
            pronormal=None,
            intravariant=record.intravariant,
            wh_index=wh,
            container=container,
        ))


# -----------------------------------------------------------------------------
# Entry points
# -----------------------------------------------------------------------------

def verify_case(case: CaseKey, tier: str = FULL, workers: int = 1) -> Report:
    if tier not in TIERS:
        raise InvalidInputError(f"unknown tier {tier!r}, expected one of {TIERS}")
    start = time.perf_counter()
    result = classify(case)
    report = Report(label=str(case), tier=tier, case=case, records=result.records)
    if tier == TARGETED and case.family_key.family not in TARGETED_FAMILIES:
        report.note(f"no targeted recipe for {case.family_key.family}; running the full tier")
        report.tier = tier = FULL
    try:
        if tier == FULL:
            _verify_full(report, result, workers)
        else:
            _verify_targeted(report, result)
    except BudgetExceededError as exc:
        report.verdict = INCONCLUSIVE
        report.details.append(str(exc))
        logger.warning(f"{report.label}: {exc}")
    report.seconds = time.perf_counter() - start
    logger.info(f"{report.label} [{report.tier}]: {report.verdict} in {report.seconds:.1f}s")
    return report


def verify_maximal_tables(key: FamilyKey, workers: int = 1) -> Report:
    """Maximal subgroup classes of S against the oracle's maximal table."""
    start = time.perf_counter()
    report = Report(label=f"maximal subgroups of {key}", tier=FULL)
    S = simple_group(key).whole()
    found = Counter(str(identify(c.representative)) for c in maximal_subgroup_classes(S, workers))
    expected = Counter()
    for row in maximal_subgroups_table(key):
        expected[str(normalize(row.descriptor))] += row.ncc
    for name in sorted((expected - found).elements()):
        report.fail(f"maximal class {name} not found")
    for name in sorted((found - expected).elements()):
        report.fail(f"unexpected maximal class {name}")
    report.seconds = time.perf_counter() - start
    return report


def verify_aut_exceptions(key: FamilyKey, workers: int = 1) -> Report:
    """Maximal subgroups of Aut(S) that meet S in a non-maximal subgroup."""
    start = time.perf_counter()
    report = Report(label=f"Aut-maximal exceptions of {key}", tier=FULL)
    emb = aut_embedding(key)
    S = emb.socle
    socle_max = [c.representative for c in maximal_subgroup_classes(S, workers)]
    found = []
    for c in maximal_subgroup_classes(emb.ambient, workers):
        K = c.representative
        H = K.intersection(S)
        if len(K) // len(H) != emb.outer_index:
            continue
        if any(len(M) == len(H) and are_conjugate(S, H, M) is not None for M in socle_max):
            continue
        found.append((len(K), str(identify(H))))
    expected = [(e.ambient_order, str(e.intersection)) for e in aut_maximal_exceptions(key)]
    if sorted(found) != sorted(expected):
        report.fail(f"exceptions {sorted(found)} differ from {sorted(expected)}")
    report.seconds = time.perf_counter() - start
    return report


def _pi_hall_of_nilpotent(N: Subgroup, pi: PrimeSet) -> Subgroup:
    gens = []
    for p in prime_support(len(N)) & pi:
        gens.extend(sylow_subgroup(N, p).generators)
    return Subgroup(N.parent, gens)


def verify_fitting_reduction(G: PermGroup, pi: PrimeSet, workers: int = 1) -> Report:
    """Passing to G/F(G) preserves pi-maximal and pronormal subgroups."""
    start = time.perf_counter()
    report = Report(label=f"Fitting reduction of {G.name} pi={pi}", tier=FULL)
    domain = G.whole()
    N = fitting_subgroup(domain)
    quotient = QuotientMap(domain, N)
    Q = quotient.group.whole()
    report.note(f"|F(G)| = {len(N)}, |G/F(G)| = {len(Q)}")

    upstairs = pi_maximal_classes(domain, pi, workers)
    downstairs = [c.representative for c in pi_maximal_classes(Q, pi, workers)]
    images = _dedupe_in(Q, [quotient.image(c.representative) for c in upstairs])
    if len(images) != len(downstairs) or any(
            not any(are_conjugate(Q, I, D) is not None for D in downstairs) for I in images):
        report.fail(f"images of {len(upstairs)} pi-maximal classes do not match "
                    f"the {len(downstairs)} classes of the quotient")

    hall = _pi_hall_of_nilpotent(N, pi)
    for c in upstairs:
        H = c.representative
        meet = H.intersection(N)
        if meet.signature != hall.signature:
            report.fail(f"H n F(G) has order {len(meet)}, O_pi(F(G)) has order {len(hall)}")
        image = quotient.image(H)
        if is_pronormal(domain, H) != is_pronormal(Q, image):
            report.fail(f"pronormality of a class of order {len(H)} is not preserved in the quotient")

    key = next((k for k in SMALL_SIMPLE if simple_order(k) == len(Q)), None)
    if key is None:
        report.note("quotient is not a small simple group; skipping the submaximal image check")
    else:
        allowed = {str(c.descriptor) for c in submaximal_classes(aut_embedding(key), pi, workers)}
        for I in images:
            name = str(identify(I)) if len(I) < len(Q) else str(whole(len(Q)))
            if name not in allowed:
                report.fail(f"image {name} is not submaximal in {key}")
    report.seconds = time.perf_counter() - start
    return report


def dpi_check(emb: EmbeddedSimple, pi: PrimeSet, workers: int = 1) -> bool:
    """True iff all pi-maximal subgroups of the socle are conjugate."""
    return len(pi_maximal_classes(emb.socle, pi, workers)) == 1


def sylow_smoke(emb: EmbeddedSimple, p: int) -> bool:
    """For a single prime the Sylow class is the only submaximal class."""
    classes = submaximal_classes(emb, PrimeSet((p,)))
    expected = pi_part(simple_order(emb.key), PrimeSet((p,)))
    return len(classes) == 1 and len(classes[0].representative) == expected


def reports_frame(reports: Sequence[Report]) -> pd.DataFrame:
    rows = []
    for r in reports:
        rows.append({
            "label": r.label,
            "family": r.case.family_key.family if r.case else "",
            "q": r.case.family_key.q if r.case else np.nan,
            "pi": str(r.case.pi) if r.case else "",
            "tier": r.tier,
            "verdict": r.verdict,
            "records": len(r.records),
            "classes": len(r.classes),
            "seconds": round(r.seconds, 2),
        })
    return pd.DataFrame(rows, columns=["label", "family", "q", "pi", "tier", "verdict",
                                       "records", "classes", "seconds"])
