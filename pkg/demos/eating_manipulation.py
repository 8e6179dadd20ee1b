"""Walk through a profitable misreport under probabilistic serial.

Agent 1 has type a>b>c and faces b>a>c and b>c>a. Reporting b>a>c shifts
probability from a and c onto b; whether that pays depends on how much the
agent values b relative to a.
"""
from fractions import Fraction

from partialsp import delta_vector, horner_polys, manipulation_gain, pref, ps, unit_setting
from partialsp.mechanisms import get_mechanism

setting = unit_setting(3)
truth, lie = pref("abc"), pref("bac")
rest = [pref("bac"), pref("bca")]

print("truthful row:", [str(x) for x in ps(setting, (truth, *rest)).row(0)])
print("misreport row:", [str(x) for x in ps(setting, (lie, *rest)).row(0)])

delta = delta_vector(get_mechanism("ps"), setting, 0, truth, lie, rest)
print("drop per object:", {o: str(v) for o, v in delta.as_dict().items()})
for k, p in enumerate(horner_polys(delta, truth), start=1):
    print(f"x_{k}(s) = {p}")

for u in ([4, 3, 0], [4, 3, 1], [5, 4, 0]):
    g = manipulation_gain(get_mechanism("ps"), setting, 0, truth, lie, rest, u)
    print(f"utility {u}: gain from lying {g}")

print("the misreport pays only when u(b)/u(a) exceeds", Fraction(3, 4))
