"""Build a mechanism that is r-partially strategyproof yet manipulable by
an agent whose utility lies just outside URBI(r).
"""
from fractions import Fraction

from partialsp import UtilityFn, unit_setting
from partialsp.psp import check_counterexample, maximality_counterexample

setting = unit_setting(3)
r = Fraction(1, 3)
u = UtilityFn.from_vector(setting.objects, [2, 1, 0])  # b is worth half of a

table = maximality_counterexample(setting, r, u)
for key, alloc in sorted(table.entries.items(), key=lambda kv: str(kv[0][0])):
    print(f"agent 1 reports {key[0]}: {[str(x) for x in alloc.row(0)]}")

chk = check_counterexample(table, setting, r, u)
print(chk.verify)
print(f"{chk.truthful} -> {chk.misreport} gains {chk.gain} at utility {[str(v) for v in u.values.values()]}")
