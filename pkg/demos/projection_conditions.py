"""Search for the projection-set conditions on one merged pair and look at what was found."""
from strongops import Projections, build, check_zgy

ops = build("FourAsym", (3, 3, 3, 3))
X34 = (2, 3)  # parties are 0-based in the library
first8 = [f"H_{r}" for r in range(1, 9)]

report = check_zgy(first8, X34, ops)
print("passed:", report.passed)
for name, cond in report.conditions.items():
    print(f"  ({name}) {'ok ' if cond.ok else 'FAIL'} {cond.detail}")
print("levels:", report.sequence)
print("witnesses for later levels:", report.witnesses)

view = Projections(ops, X34, first8)
for b in ("H_1", "H_2"):
    print(f"{b} projects onto {sorted(view.px[b].tuples)}; PI set {report.pi_sets[b]}")

# a single block cannot be covered by anything else
lonely = check_zgy(["H_1"], X34, ops)
print("H_1 alone:", lonely.first_failure())
