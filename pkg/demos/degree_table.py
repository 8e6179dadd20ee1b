"""Degree of strategyproofness of the library mechanisms on small markets.

Mechanisms that violate swap monotonicity or upper invariance have no
positive bound and are reported as such.
"""
import sys

from partialsp import PreconditionError, compute_rho, get_mechanism, unit_setting
from partialsp.mechanisms import LIBRARY

sizes = [int(a) for a in sys.argv[1:]] or [3]

for n in sizes:
    setting = unit_setting(n)
    print(f"{n} agents, {n} objects, unit capacity")
    for name in LIBRARY:
        try:
            res = compute_rho(get_mechanism(name), setting)
        except PreconditionError as exc:
            print(f"  {name:22s} not partially strategyproof ({exc.report.axiom} fails)")
            continue
        print(f"  {name:22s} rho = {res.value}  ({res.seconds:.1f}s)")
