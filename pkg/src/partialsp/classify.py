"""Axiom classification matrix for the library mechanisms.

A finite tool cannot certify "in general" claims. Each mechanism is probed
on the settings pinned in ``MANIFEST``; a cell is a check mark iff the
property holds on every probe. Exhaustive probes back the check marks, and
restricted probes (fixed witness profiles) can only produce crosses.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .axioms import AxiomReport, RowOracle, check_all
from .core import named_setting
from .mechanisms import LIBRARY, get_mechanism
from .psp import RhoResult, compute_rho

MANIFEST_VERSION = 1

COLUMNS = ("swap_monotonic", "upper_invariant", "lower_invariant", "strategyproof", "r_psp")
HEADERS = ("swap", "upper", "lower", "SP", "r-PSP")

# expected pattern, in COLUMNS order
EXPECTED = {
    "rsd": (True, True, True, True, True),
    "ps": (True, True, False, False, True),
    "nbm": (False, True, False, False, False),
    "abm": (True, True, False, False, True),
    "rank_min": (False, False, False, False, False),
    "hybrid(rsd,ps,1/2)": (True, True, False, False, True),
    "hybrid(rsd,abm,1/2)": (True, True, False, False, True),
}


@dataclass(frozen=True)
class Probe:
    setting: str
    profiles: tuple | None = None
    note: str = ""

    @property
    def restricted(self) -> bool:
        return self.profiles is not None


# Rank-minimizing witnesses. Agent 1 (index 0) walks from its type to the
# final misreport one adjacent swap at a time; each step is a source.
_RV_4 = (
    (("adcb", "abdc", "bcda", "cabd"), (0,), ("acdb", "acbd")),
    (("acdb", "abdc", "bcda", "cabd"), (0,), ("acbd",)),
)
_RV_5 = (
    (("acbde", "cbade", "cabed", "acbed", "eabcd"), (0,), ("abcde", "bacde")),
    (("abcde", "cbade", "cabed", "acbed", "eabcd"), (0,), ("bacde",)),
)

_FULL = (Probe("3x3unit"), Probe("4x4unit"))

MANIFEST = {
    "rsd": _FULL,
    "ps": _FULL,
    "nbm": _FULL,
    "abm": _FULL,
    "rank_min": (
        Probe("4x4unit", _RV_4, "upper invariance / swap monotonicity witness"),
        Probe("5x5unit", _RV_5, "lower invariance witness"),
    ),
    "hybrid(rsd,ps,1/2)": _FULL,
    "hybrid(rsd,abm,1/2)": _FULL,
}


@dataclass
class Row:
    mechanism: str
    cells: dict
    evidence: dict = field(default_factory=dict)
    rho: dict = field(default_factory=dict)
    seconds: float = 0.0

    def pattern(self) -> tuple[bool, ...]:
        return tuple(self.cells[c] for c in COLUMNS)

    @property
    def matches(self) -> bool | None:
        exp = EXPECTED.get(self.mechanism)
        return None if exp is None else exp == self.pattern()


def classify(name: str, probes=None, workers: int = 1) -> Row:
    start = time.perf_counter()
    f = get_mechanism(name)
    probes = MANIFEST[name] if probes is None else probes
    axioms = COLUMNS[:4]
    cells = {c: True for c in COLUMNS}
    evidence: dict = {c: [] for c in COLUMNS}
    rho: dict = {}
    for probe in probes:
        setting = named_setting(probe.setting)
        oracle = RowOracle(f, setting) if workers <= 1 else None
        reports: dict[str, AxiomReport] = check_all(
            f, setting, axioms, profiles=probe.profiles, workers=workers, oracle=oracle
        )
        for ax, rep in reports.items():
            evidence[ax].append((probe.setting, rep))
            cells[ax] = cells[ax] and rep.holds
        psp = reports["swap_monotonic"].holds and reports["upper_invariant"].holds
        cells["r_psp"] = cells["r_psp"] and psp
        if psp and not probe.restricted:
            res: RhoResult = compute_rho(
                f, setting, workers=workers, oracle=oracle, check_precondition=False
            )
            rho[probe.setting] = res
    return Row(name, cells, evidence, rho, time.perf_counter() - start)


def table1(mechanisms=LIBRARY, workers: int = 1, progress=None) -> list[Row]:
    rows = []
    for name in mechanisms:
        row = classify(name, workers=workers)
        if progress is not None:
            progress(row)
        rows.append(row)
    return rows


def _mark(b: bool) -> str:
    return "✓" if b else "✗"


def format_text(rows: list[Row]) -> str:
    width = max(len(r.mechanism) for r in rows) + 2
    lines = [
        "mechanism".ljust(width) + "".join(h.ljust(7) for h in HEADERS) + "rho",
    ]
    for r in rows:
        rho = ", ".join(f"{k}: {v.lo if v.exact else float(v.lo)}" for k, v in r.rho.items())
        line = r.mechanism.ljust(width) + "".join(_mark(r.cells[c]).ljust(7) for c in COLUMNS)
        line += rho or "-"
        if r.matches is False:
            line += "   (differs from expected pattern)"
        lines.append(line)
    lines.append(f"manifest v{MANIFEST_VERSION}; settings per mechanism:")
    for r in rows:
        probes = MANIFEST.get(r.mechanism, ())
        desc = ", ".join(p.setting + (" (witness profiles)" if p.restricted else "") for p in probes)
        lines.append(f"  {r.mechanism}: {desc}")
    return "\n".join(lines)


def to_dict(rows: list[Row]) -> dict:
    out = []
    for r in rows:
        evidence = {}
        for ax, items in r.evidence.items():
            evidence[ax] = [
                {"setting": s, **rep.to_dict(named_setting(s))} for s, rep in items
            ]
        out.append(
            {
                "mechanism": r.mechanism,
                "cells": r.cells,
                "matches_expected": r.matches,
                "rho": {k: v.to_dict() for k, v in r.rho.items()},
                "evidence": evidence,
                "seconds": round(r.seconds, 3),
            }
        )
    return {"manifest_version": MANIFEST_VERSION, "columns": list(COLUMNS), "rows": out}


def csv_rows(rows: list[Row]) -> list[list[str]]:
    out = [["mechanism", *COLUMNS, "rho_settings"]]
    for r in rows:
        rho = ";".join(
            f"{k}={v.to_dict()['value'] or v.to_dict()['interval']}" for k, v in r.rho.items()
        )
        out.append([r.mechanism, *("1" if r.cells[c] else "0" for c in COLUMNS), rho])
    return out
