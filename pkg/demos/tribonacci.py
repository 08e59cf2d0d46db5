"""Certify the forward/backward tribonacci pair and look at its common values."""
from recurcommon.baker import certify
from recurcommon.families import build_bravo_pair
from recurcommon.search import audit_ledger, enumerate_common_values, hit_law, verify_no_violation

forward, backward = build_bravo_pair(1, 1)
cert = certify(forward, backward)

w = cert.witness
print(f"witness p={w['p']} q={w['q']} delta={w['delta']} theta={w['theta']}")
print(f"c0 = {cert.c0:.3e}")
print(f"c1 = {cert.c1:.3e}")

hits = enumerate_common_values(forward, backward, 200, 200)
print("common values f_n = f_{-m}:", [(h.n, h.m, h.value) for h in hits])

report = verify_no_violation(None, cert, 60, 60)
print(f"inequality sweep 60x60: {len(report.failures)} failures, explained={report.failures_explained}")
print(report.banner)

for name, entry in audit_ledger(cert, 200).items():
    print(f"  {name:15s} from {entry['from']:<24} checked {entry['checked']:4d} "
          f"violations {len(entry['violations'])}")
print("hit law above threshold:", hit_law(cert, hits)["above_threshold"])
