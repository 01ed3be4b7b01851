import sys

from engine import TARGETED, verify_case
from oracle import CaseKey
from pi_arith import FamilyKey, PrimeSet
from structid import named
from utils import setup_logging

setup_logging()

# Large prime fields where the dihedral rows fall inside an S4
failed = False
for q in (137, 103):
    case = CaseKey(FamilyKey("L2_PRIME", q), PrimeSet((2, 3)))
    print(f"\nVerifying {case} with targeted searches...")
    report = verify_case(case, TARGETED)
    for c in report.classes:
        where = f"inside {c.container}" if c.container else "pi-maximal"
        print(f"  {c.descriptor}: {where}")
    inside = sum(1 for c in report.classes if c.container == named("SYM4"))
    if report.ok and inside == 2:
        print(f"✅ {report.verdict} in {report.seconds:.1f}s")
    else:
        failed = True
        print(f"🚨 {report.verdict}: {'; '.join(report.details) or 'containers not found'}")

sys.exit(1 if failed else 0)
