import sys

from cli import load_corpus
from engine import dpi_check, reports_frame, verify_case, verify_maximal_tables
from groups import aut_embedding
from oracle import dpi_predict
from pi_arith import FamilyKey
from utils import setup_logging

setup_logging()

TIER1_GROUPS = [
    FamilyKey("L2_2P", 4), FamilyKey("L2_PRIME", 7), FamilyKey("L2_2P", 8),
    FamilyKey("L2_PRIME", 13), FamilyKey("L2_PRIME", 17), FamilyKey("L2_3P", 27),
    FamilyKey("L3_3", 3), FamilyKey("SZ", 8),
]

# Recompute every exhaustive case and compare with the predicted tables
entries = load_corpus("corpus/tier1.json")
print(f"Running {len(entries)} exhaustive cases...")
reports = [verify_case(e["case"], e["tier"]) for e in entries]

print("Checking maximal subgroup tables...")
for key in TIER1_GROUPS:
    reports.append(verify_maximal_tables(key))

frame = reports_frame(reports)
print(frame.to_string(index=False))

failed = False
bad = frame[frame["verdict"] != "MATCH"]
if not bad.empty:
    failed = True
    print(f"\n🚨 {len(bad)} case(s) disagree with the prediction:")
    for report in reports:
        if not report.ok:
            print(f"  {report.label}: {'; '.join(report.details)}")

# Conjugacy of all pi-maximal subgroups against the prediction
print("\nChecking D_pi predictions...")
embeddings = {}
dpi_wrong = []
for e in entries:
    case = e["case"]
    key = case.family_key
    if key not in embeddings:
        embeddings[key] = aut_embedding(key)
    computed, predicted = dpi_check(embeddings[key], case.pi), dpi_predict(case)
    if computed != predicted:
        dpi_wrong.append(f"{case}: computed {computed}, predicted {predicted}")
if dpi_wrong:
    failed = True
    print(f"🚨 {len(dpi_wrong)} D_pi prediction(s) wrong:")
    for line in dpi_wrong:
        print(f"  {line}")
else:
    print(f"✅ D_pi agrees on all {len(entries)} cases.")

if failed:
    sys.exit(1)
print(f"\n✅ All {len(reports)} checks match.")
