"""Exhaustive checkers for the swap axioms, strategyproofness and weak strategyproofness.

Every checker walks (agent, profile, misreport) constraints in a fixed
order, so the witness reported on failure is the first violation in that
order regardless of how the work was split across processes.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .core import Dominance, PrefOrder, Setting, fosd_compare, make_profile
from .enumeration import (
    DEFAULT_PROFILE_CAP,
    DEFAULT_TYPE_CAP,
    all_types,
    best_symmetry,
    partition,
    profiles as enumerate_profiles,
)
from .mechanisms import Mechanism, MissingProfile, TableMechanism
from .serialize import fmt

AXIOMS = (
    "swap_monotonic",
    "upper_invariant",
    "lower_invariant",
    "strategyproof",
    "weakly_strategyproof",
)


@dataclass(frozen=True)
class Witness:
    agent: int
    profile: tuple
    misreport: PrefOrder
    objects: tuple[str, ...]
    delta: tuple[Fraction, ...]
    rank: int | None = None

    @property
    def truthful(self) -> PrefOrder:
        return self.profile[self.agent]

    def deviated_profile(self) -> tuple:
        p = list(self.profile)
        p[self.agent] = self.misreport
        return tuple(p)

    def to_dict(self, setting: Setting) -> dict:
        d = {
            "agent": self.agent,
            "profile": [list(t.ranking) for t in self.profile],
            "misreport": list(self.misreport.ranking),
            "objects": list(self.objects),
            "delta": {o: fmt(x) for o, x in zip(setting.objects, self.delta)},
        }
        if self.rank is not None:
            d["rank"] = self.rank
        return d


@dataclass
class AxiomReport:
    axiom: str
    holds: bool
    witness: Witness | None
    coverage: str
    constraints: int
    skipped: int = 0
    symmetry: str = "none"

    def to_dict(self, setting: Setting) -> dict:
        return {
            "axiom": self.axiom,
            "holds": self.holds,
            "witness": self.witness.to_dict(setting) if self.witness else None,
            "coverage": self.coverage,
            "constraints": self.constraints,
            "skipped": self.skipped,
            "symmetry": self.symmetry,
        }

    def __str__(self):
        verdict = "holds" if self.holds else "FAILS"
        s = f"{self.axiom}: {verdict} ({self.constraints} constraints, {self.coverage} coverage"
        if self.skipped:
            s += f", {self.skipped} skipped"
        s += f", symmetry={self.symmetry})"
        if self.witness:
            w = self.witness
            s += (
                f"\n  agent {w.agent + 1} reporting {w.misreport} instead of {w.truthful}"
                f" against {[str(t) for t in w.profile]}; objects {list(w.objects)}"
            )
        return s


# --- evaluation plumbing ----------------------------------------------------

class RowOracle:
    """Memoized row lookup. Anonymous built-ins share one evaluation per multiset."""

    def __init__(self, mech: Mechanism, setting: Setting):
        self.mech = mech
        self.setting = setting
        self.canonical = mech.anonymous and not isinstance(mech, TableMechanism)
        self._cache: dict = {}

    def _alloc(self, key):
        try:
            hit = self._cache[key]
        except KeyError:
            try:
                hit = self.mech.allocate(self.setting, key).probs
            except MissingProfile:
                hit = None
            self._cache[key] = hit
        if hit is None:
            raise MissingProfile(key)
        return hit

    def row(self, profile: tuple, i: int) -> tuple[Fraction, ...]:
        if self.canonical:
            key = tuple(sorted(profile))
            return self._alloc(key)[key.index(profile[i])]
        return self._alloc(profile)[i]


@dataclass(frozen=True)
class Source:
    index: int
    agents: tuple[int, ...]
    profile: tuple
    only: tuple | None = None


def sources(
    mech: Mechanism,
    setting: Setting,
    symmetry: str | None = None,
    profiles: Iterable | None = None,
    type_cap: int = DEFAULT_TYPE_CAP,
    profile_cap: int = DEFAULT_PROFILE_CAP,
) -> tuple[list[Source], str]:
    """(agent, profile) sources to scan, and the reduction actually used.

    ``profiles`` restricts the scan to given profiles, each optionally
    written ``(profile, agents)`` or ``(profile, agents, misreports)``;
    partial tables scan their own entries.
    """
    if profiles is not None:
        out = []
        for k, item in enumerate(profiles):
            only = None
            if isinstance(item[0], (str, PrefOrder)):
                prof, agents = item, range(setting.n)
            elif len(item) == 2:
                prof, agents = item
            else:
                prof, agents, only = item
                only = tuple(make_profile(setting, [o] * setting.n)[0] for o in only)
            out.append(Source(k, tuple(agents), make_profile(setting, prof), only))
        return out, "restricted"
    if isinstance(mech, TableMechanism) and mech.keyed_by is not None and symmetry in (None, "keyed"):
        return _keyed_sources(mech, setting, type_cap), "keyed"
    if isinstance(mech, TableMechanism) and mech.partial:
        return [Source(k, tuple(range(setting.n)), p) for k, p in enumerate(mech.entries)], "none"
    symmetry = symmetry or best_symmetry(setting, mech)
    classes = enumerate_profiles(setting, symmetry, mech, type_cap, profile_cap)
    return [Source(c.index, c.focal, c.representative) for c in classes], symmetry


def _keyed_sources(mech: TableMechanism, setting: Setting, type_cap: int) -> list[Source]:
    """Sources for a table that only reads the keyed agents' reports.

    Unkeyed agents cannot change anything by misreporting, and the other
    reports are irrelevant, so they are pinned to the first type.
    """
    types = all_types(setting, type_cap)
    if mech.partial:
        keys = list(mech.entries)
    else:
        keys = list(itertools.product(types, repeat=len(mech.keyed_by)))
    out = []
    for k, key in enumerate(keys):
        prof = [types[0]] * setting.n
        for i, t in zip(mech.keyed_by, key):
            prof[i] = t
        out.append(Source(k, mech.keyed_by, tuple(prof)))
    return out


def misreports(setting: Setting, t: PrefOrder, local: bool, types: Sequence[PrefOrder]):
    """(position, misreport, swap rank) triples; swap rank is None for global ones."""
    if local:
        m_real = len(setting.real_objects)
        for k in range(1, m_real):
            yield k, t.swap(k), k
    else:
        for pos, tp in enumerate(types):
            if tp != t:
                yield pos, tp, None


def scan(
    mech: Mechanism,
    setting: Setting,
    srcs: Iterable[Source],
    local: bool,
    visit: Callable,
    oracle: RowOracle | None = None,
    type_cap: int = DEFAULT_TYPE_CAP,
):
    """Feed every evaluable constraint to ``visit``; stop at the first non-None return.

    Returns ``(hit, counts)`` where hit is ``(key, result)`` or None and
    counts lists ``(source index, evaluated, skipped)`` per visited source.
    """
    oracle = oracle or RowOracle(mech, setting)
    types = all_types(setting, type_cap)
    counts = []
    for src in srcs:
        prof = src.profile
        evaluated = skipped = 0
        for i in src.agents:
            t = prof[i]
            try:
                x = oracle.row(prof, i)
            except MissingProfile:
                skipped += sum(
                    1
                    for _, tp, _ in misreports(setting, t, local, types)
                    if src.only is None or tp in src.only
                )
                continue
            for pos, tp, k in misreports(setting, t, local, types):
                if src.only is not None and tp not in src.only:
                    continue
                dev = prof[:i] + (tp,) + prof[i + 1 :]
                try:
                    y = oracle.row(dev, i)
                except MissingProfile:
                    skipped += 1
                    continue
                evaluated += 1
                res = visit(i, prof, t, tp, k, x, y)
                if res is not None:
                    counts.append((src.index, evaluated, skipped))
                    return ((src.index, i, pos), res), counts
        counts.append((src.index, evaluated, skipped))
    return None, counts


def merge(parts: list):
    """Combine chunk results: earliest hit, plus counts up to that hit.

    Counts therefore do not depend on how sources were partitioned.
    """
    hits = [p[0] for p in parts if p[0] is not None]
    hit = min(hits, key=lambda h: h[0]) if hits else None
    evaluated = skipped = 0
    for _, counts in parts:
        for idx, e, s in counts:
            if hit is None or idx <= hit[0][0]:
                evaluated += e
                skipped += s
    return hit, evaluated, skipped


def run_chunks(chunk_fn, payload, srcs: list[Source], workers: int) -> list:
    """Apply ``chunk_fn((payload, chunk))`` per partition, in-process when workers == 1."""
    if workers <= 1:
        return [chunk_fn((payload, srcs))]
    chunks = [list(c) for c in partition(srcs, workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(chunk_fn, [(payload, c) for c in chunks]))


# --- axiom predicates -------------------------------------------------------

def violation(axiom: str, setting: Setting, t: PrefOrder, k: int | None, x, y):
    """Objects witnessing a violation of ``axiom`` by truthful row x vs misreport row y, or None."""
    idx = setting.index
    if axiom in ("swap_monotonic", "upper_invariant", "lower_invariant"):
        a, b = t.ch(k), t.ch(k + 1)
        if axiom == "swap_monotonic":
            if x == y:
                return None
            ia, ib = idx(a), idx(b)
            if x[ia] > y[ia] and x[ib] < y[ib]:
                return None
            return (a, b)
        group = t.ranking[: k - 1] if axiom == "upper_invariant" else t.ranking[k + 1 :]
        bad = tuple(o for o in group if x[idx(o)] != y[idx(o)])
        return bad or None
    if axiom == "strategyproof":
        cx = cy = Fraction(0)
        bad = []
        for o in t.ranking:
            cx += x[idx(o)]
            cy += y[idx(o)]
            if cx < cy:
                bad.append(o)
        return tuple(bad) or None
    if axiom == "weakly_strategyproof":
        if fosd_compare(y, x, t, setting.objects) is Dominance.DOMINATES_STRICTLY:
            return tuple(o for o in t.ranking if x[idx(o)] != y[idx(o)])
        return None
    raise ValueError(f"unknown axiom {axiom!r}")


def _check_chunk(args):
    (axiom, local, mech, setting, type_cap, oracle), chunk = args

    def visit(i, prof, t, tp, k, x, y):
        bad = violation(axiom, setting, t, k, x, y)
        if bad is None:
            return None
        delta = tuple(a - b for a, b in zip(x, y))
        return Witness(i, prof, tp, bad, delta, k)

    return scan(mech, setting, chunk, local, visit, oracle, type_cap)


def _check(
    axiom: str,
    mech: Mechanism,
    setting: Setting,
    local: bool,
    symmetry: str | None,
    profiles,
    workers: int,
    type_cap: int = DEFAULT_TYPE_CAP,
    profile_cap: int = DEFAULT_PROFILE_CAP,
    oracle: RowOracle | None = None,
) -> AxiomReport:
    srcs, used = sources(mech, setting, symmetry, profiles, type_cap, profile_cap)
    oracle = oracle if workers <= 1 else None
    payload = (axiom, local, mech, setting, type_cap, oracle)
    parts = run_chunks(_check_chunk, payload, srcs, workers)
    hit, evaluated, skipped = merge(parts)
    partial = skipped > 0 or used == "restricted" or (
        isinstance(mech, TableMechanism) and mech.partial
    )
    witness = hit[1] if hit else None
    return AxiomReport(
        axiom,
        witness is None,
        witness,
        "partial" if partial else "full",
        evaluated,
        skipped,
        used,
    )


def check_swap_monotonicity(f, setting, *, symmetry=None, profiles=None, workers=1, **caps) -> AxiomReport:
    return _check("swap_monotonic", f, setting, True, symmetry, profiles, workers, **caps)


def check_upper_invariance(f, setting, *, symmetry=None, profiles=None, workers=1, **caps) -> AxiomReport:
    return _check("upper_invariant", f, setting, True, symmetry, profiles, workers, **caps)


def check_lower_invariance(f, setting, *, symmetry=None, profiles=None, workers=1, **caps) -> AxiomReport:
    return _check("lower_invariant", f, setting, True, symmetry, profiles, workers, **caps)


def check_strategyproof(
    f, setting, mode: str = "global", *, symmetry=None, profiles=None, workers=1, **caps
) -> AxiomReport:
    """Truthful row must weakly FOSD-dominate every misreport row.

    ``mode="local"`` restricts misreports to adjacent swaps.
    """
    if mode not in ("global", "local"):
        raise ValueError(f"mode must be 'global' or 'local', got {mode!r}")
    return _check("strategyproof", f, setting, mode == "local", symmetry, profiles, workers, **caps)


def check_weak_sp(f, setting, *, symmetry=None, profiles=None, workers=1, **caps) -> AxiomReport:
    return _check("weakly_strategyproof", f, setting, False, symmetry, profiles, workers, **caps)


CHECKS = {
    "swap_monotonic": check_swap_monotonicity,
    "upper_invariant": check_upper_invariance,
    "lower_invariant": check_lower_invariance,
    "strategyproof": check_strategyproof,
    "weakly_strategyproof": check_weak_sp,
}


def check_all(f, setting, axioms: Sequence[str] = AXIOMS, **kw) -> dict[str, AxiomReport]:
    return {a: CHECKS[a](f, setting, **kw) for a in axioms}


def recheck(report: AxiomReport, f: Mechanism, setting: Setting) -> bool:
    """Re-evaluate the mechanism from scratch and confirm the witness violates the axiom."""
    w = report.witness
    if w is None:
        return False
    x = f.allocate(setting, w.profile).row(w.agent)
    y = f.allocate(setting, w.deviated_profile()).row(w.agent)
    k = w.rank
    if report.axiom in ("swap_monotonic", "upper_invariant", "lower_invariant"):
        if w.truthful.swap(k) != w.misreport:
            return False
    bad = violation(report.axiom, setting, w.truthful, k, x, y)
    return bad is not None and tuple(a - b for a, b in zip(x, y)) == w.delta
