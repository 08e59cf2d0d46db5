"""Sweep the three family constructors over a small grid and certify every emitted pair."""
import itertools
from collections import Counter

from recurcommon.baker import certify
from recurcommon.families import ConditionFailed, FamilyParams, build

grid = range(-3, 4)
points = [FamilyParams("CaseI", a, b, p, q) for a, b in itertools.product(grid, grid)
          for p, q in [(1, 1), (1, 2), (2, 1), (1, 4)]]
points += [FamilyParams(case, a, b) for case in ("CaseII", "Bravo")
           for a, b in itertools.product(grid, grid)]

certified, clauses = [], Counter()
for params in points:
    try:
        pair = build(params)
    except ConditionFailed as exc:
        clauses[(params.case, exc.clause)] += 1
        continue
    cert = certify(*pair)
    certified.append((params.case, params.a, params.b, params.p, params.q, cert.witness["delta"]))

print(f"{len(certified)} pairs certified")
for row in certified:
    print("  ", *row)
print("rejections by clause:")
for (case, clause), n in sorted(clauses.items()):
    print(f"  {case:6s} {n:3d}  {clause}")
