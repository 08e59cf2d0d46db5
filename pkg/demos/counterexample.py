"""a_n = 2^n against b_m from X^2 + 4: infinitely many common values, and why certify refuses."""
from recurcommon.baker import HypothesisFailed, certify
from recurcommon.recurrence import RecurrenceSpec
from recurcommon.search import enumerate_common_values

a = RecurrenceSpec((2,), (1,), "2^n")
b = RecurrenceSpec((-4, 0), (2, 0), "X^2+4, b_0=2, b_1=0")

for hit in enumerate_common_values(a, b, 40, 40):
    print(f"a_{hit.n} = b_{hit.m} = {hit.value}")

try:
    certify(a, b)
except HypothesisFailed as exc:
    print(f"rejected: {exc.which} ({exc.detail})")
