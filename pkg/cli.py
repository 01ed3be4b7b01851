"""Command-line front end: classify, verify and corpus runs.

stdout carries only the result payload (text table or canonical JSON);
everything else is logged to stderr.
"""
import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import List, Optional, Sequence

import pandas as pd

from engine import FULL, INCONCLUSIVE, MATCH, TIERS, Report, reports_frame, verify_case
from oracle import FAMILY_SLUGS, CaseKey, ClassifyResult, classify
from pi_arith import FamilyKey, PrimeSet
from utils import (BudgetExceededError, CapExceededError, ConfigError, ConstructionError,
                   InvalidInputError, canonical_json, get_settings, logger, payload_digest,
                   set_settings, setup_logging)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INVALID = 2
EXIT_LIMIT = 3
EXIT_INTERNAL = 4

SLUG_FAMILIES = {slug: family for family, slug in FAMILY_SLUGS.items()}
CORPUS_SCHEMA = 1


# -----------------------------------------------------------------------------
# Parsing
# -----------------------------------------------------------------------------

def parse_pi(text: str) -> PrimeSet:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InvalidInputError(f"--pi must be comma-separated integers, got {text!r}")
    if len(values) != len(set(values)):
        raise InvalidInputError(f"--pi lists a prime twice: {text!r}")
    return PrimeSet(values)


def make_case(family: str, q: Optional[int], pi) -> CaseKey:
    if family not in SLUG_FAMILIES:
        raise InvalidInputError(f"unknown family {family!r}, expected one of {sorted(SLUG_FAMILIES)}")
    family = SLUG_FAMILIES[family]
    if q is None:
        if family != "L3_3":
            raise InvalidInputError(f"--q is required for {FAMILY_SLUGS[family]}")
        q = 3
    pi = pi if isinstance(pi, PrimeSet) else parse_pi(",".join(str(p) for p in pi))
    return CaseKey(FamilyKey(family, q), pi)


def load_corpus(path: str) -> List[dict]:
    """Validated case entries of a corpus document; raises InvalidInputError
    naming the offending case and field."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read corpus {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: line {exc.lineno}: {exc.msg}")
    if not isinstance(doc, dict) or doc.get("schema") != CORPUS_SCHEMA:
        raise InvalidInputError(f"{path}: expected an object with \"schema\": {CORPUS_SCHEMA}")
    cases = doc.get("cases")
    if not isinstance(cases, list):
        raise InvalidInputError(f"{path}: \"cases\" must be a list")
    entries = []
    for index, entry in enumerate(cases):
        where = f"{path}: case {index}"
        if not isinstance(entry, dict):
            raise InvalidInputError(f"{where}: expected an object")
        for name in ("family", "pi"):
            if name not in entry:
                raise InvalidInputError(f"{where}: missing field {name!r}")
        if not isinstance(entry["pi"], list) or not all(isinstance(p, int) for p in entry["pi"]):
            raise InvalidInputError(f"{where}: field 'pi' must be a list of integers")
        tier = entry.get("tier", FULL)
        if tier not in TIERS:
            raise InvalidInputError(f"{where}: field 'tier' must be one of {TIERS}")
        try:
            case = make_case(entry["family"], entry.get("q"), entry["pi"])
        except InvalidInputError as exc:
            raise InvalidInputError(f"{where}: {exc}")
        entries.append({"case": case, "tier": tier, "expect": entry.get("expect")})
    return entries


# -----------------------------------------------------------------------------
# Rendering
# -----------------------------------------------------------------------------

def render_classify(result: ClassifyResult) -> str:
    lines = [f"{result.case}  regime={result.regime}"]
    if not result.records:
        lines.append("(no records)")
        return "\n".join(lines)
    frame = pd.DataFrame([{
        "descriptor": str(r.descriptor),
        "order": r.order,
        "ncc": r.ncc,
        "aut": r.aut_action,
        "pi-max": "yes" if r.pi_maximal else "no",
        "container": str(r.container) if r.container else "",
        "intravariant": "yes" if r.intravariant else "no",
        "row": f"{r.table}:{r.row}",
    } for r in result.records])
    lines.append(frame.to_string(index=False))
    return "\n".join(lines)


def render_report(report: Report) -> str:
    lines = [f"{report.label}  tier={report.tier}  verdict={report.verdict}"]
    lines.extend(f"  - {d}" for d in report.details)
    for c in report.classes:
        container = f" in {c.container}" if c.container else ""
        lines.append(f"  {c.descriptor}: class size {c.class_size}, wh {c.wh_index}, "
                     f"pi-max {c.pi_maximal_in_socle}{container}, intravariant {c.intravariant}")
    return "\n".join(lines)


def _emit(payload: str) -> None:
    sys.stdout.write(payload + "\n")
    sys.stdout.flush()


def _exit_for(report: Report) -> int:
    if report.verdict == MATCH:
        return EXIT_OK
    if report.verdict == INCONCLUSIVE:
        return EXIT_LIMIT
    return EXIT_MISMATCH


# -----------------------------------------------------------------------------
# Commands
# -----------------------------------------------------------------------------

def cmd_classify(args) -> int:
    result = classify(make_case(args.family, args.q, parse_pi(args.pi)))
    _emit(canonical_json(result.to_dict()) if args.json else render_classify(result))
    return EXIT_OK


def cmd_verify(args) -> int:
    case = make_case(args.family, args.q, parse_pi(args.pi))
    report = verify_case(case, args.tier, workers=args.threads)
    _emit(canonical_json(report.to_dict()) if args.json else render_report(report))
    return _exit_for(report)


def _expected_verdict(entry: dict, report: Report) -> Report:
    """A corpus entry may pin the oracle output; a differing oracle is a mismatch."""
    expect = entry["expect"]
    if expect is not None and [r.to_dict() for r in report.records] != expect:
        report.fail("oracle records differ from the corpus expectation")
    return report


def cmd_corpus(args) -> int:
    entries = load_corpus(args.file)
    logger.info(f"corpus {args.file}: {len(entries)} cases, {args.threads} threads")

    def run(entry):
        return _expected_verdict(entry, verify_case(entry["case"], entry["tier"]))

    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        reports = list(pool.map(run, entries))

    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for report in reports:
                fh.write(canonical_json(report.to_dict()) + "\n")

    frame = reports_frame(reports)
    if not frame.empty:
        logger.info("\n" + frame.to_string(index=False))
    verdicts = [r.verdict for r in reports]
    summary = {
        "cases": len(reports),
        "match": verdicts.count(MATCH),
        "mismatch": verdicts.count("MISMATCH"),
        "inconclusive": verdicts.count(INCONCLUSIVE),
        "verdicts": [{"label": r.label, "verdict": r.verdict} for r in reports],
    }
    summary["digest"] = payload_digest([r.to_dict() for r in reports])
    _emit(canonical_json(summary))
    if summary["mismatch"]:
        return EXIT_MISMATCH
    if summary["inconclusive"]:
        return EXIT_LIMIT
    return EXIT_OK


# -----------------------------------------------------------------------------
# Entry point
# -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="submax",
        description="Classify and verify pi-submaximal subgroups of minimal simple groups.")
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    def case_flags(p):
        p.add_argument("--family", required=True, choices=sorted(SLUG_FAMILIES))
        p.add_argument("--q", type=int, default=None, help="field size (omit for l3-3)")
        p.add_argument("--pi", required=True, help="comma-separated primes, e.g. 2,3")
        p.add_argument("--json", action="store_true", help="emit canonical JSON")

    def run_flags(p):
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
        p.add_argument("--budget", type=int, default=None, help="search budget in steps")

    p_classify = sub.add_parser("classify", help="print the predicted classification")
    case_flags(p_classify)
    p_classify.set_defaults(handler=cmd_classify)

    p_verify = sub.add_parser("verify", help="recompute one case by group computation")
    case_flags(p_verify)
    run_flags(p_verify)
    p_verify.add_argument("--tier", choices=TIERS, default=FULL)
    p_verify.set_defaults(handler=cmd_verify)

    p_corpus = sub.add_parser("corpus", help="verify every case of a corpus file")
    p_corpus.add_argument("--file", required=True)
    p_corpus.add_argument("--out", default=None, help="JSON-lines report stream")
    run_flags(p_corpus)
    p_corpus.set_defaults(handler=cmd_corpus)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging("DEBUG" if args.verbose else None)
    try:
        if getattr(args, "budget", None) is not None:
            if args.budget <= 0:
                raise ConfigError(f"--budget must be positive, got {args.budget}")
            set_settings(replace(get_settings(), budget_steps=args.budget))
        if getattr(args, "threads", 1) < 1:
            raise ConfigError(f"--threads must be positive, got {args.threads}")
        return args.handler(args)
    except (InvalidInputError, ConfigError) as exc:
        logger.error(str(exc))
        return EXIT_INVALID
    except CapExceededError as exc:
        logger.error(f"{exc.cap_name}: requested {exc.requested}, limit {exc.limit}")
        return EXIT_LIMIT
    except BudgetExceededError as exc:
        logger.error(str(exc))
        return EXIT_LIMIT
    except ConstructionError as exc:
        logger.error(f"internal construction failure: {exc}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
