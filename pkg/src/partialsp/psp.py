"""Partial strategyproofness: URBI(r) utilities, the Horner constraint
polynomials, verification at a bound r, and the exact degree of
strategyproofness rho.

Write s = 1/r. For an agent of type t = a_1 > ... > a_m and a misreport t',
let delta_j be the drop in the agent's probability for object j. The
mechanism is r-partially strategyproof iff every prefix polynomial

    x_1(s) = delta_{a_1},   x_k(s) = s * x_{k-1}(s) + delta_{a_k}

is nonnegative at s = 1/r for k = 1..m-1.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import poly
from .axioms import (
    AxiomReport,
    RowOracle,
    check_swap_monotonicity,
    check_upper_invariance,
    merge,
    run_chunks,
    scan,
    sources,
)
from .core import (
    Allocation,
    InvalidPreference,
    PrefOrder,
    Setting,
    UtilityFn,
    as_fraction,
    utility_consistent,
)
from .enumeration import DEFAULT_PROFILE_CAP, DEFAULT_TYPE_CAP
from .mechanisms import Mechanism, TableMechanism
from .serialize import fmt

WITNESS_SCALE = 10**6


class PreconditionError(ValueError):
    """The mechanism is not swap monotonic and upper invariant."""

    def __init__(self, report: AxiomReport):
        msg = f"degree of strategyproofness needs {report.axiom.replace('_', ' ')}, which fails"
        if report.witness is not None:
            w = report.witness
            msg += (
                f": agent {w.agent + 1} swapping to {w.misreport} from {w.truthful}"
                f" against {[str(t) for t in w.profile]}"
            )
        super().__init__(msg)
        self.report = report


# --- utilities --------------------------------------------------------------

def _values(u) -> list[Fraction]:
    if isinstance(u, UtilityFn):
        return list(u.values.values())
    return [as_fraction(v) for v in u]


def urbi_contains(u, r) -> bool:
    """Whether ``u`` satisfies uniformly relatively bounded indifference for bound r.

    Checking adjacent distinct values suffices: for r <= 1 the pairwise
    condition compounds along the chain.
    """
    r = as_fraction(r)
    vals = sorted(set(_values(u)), reverse=True)
    low = vals[-1]
    shifted = [v - low for v in vals]
    return all(r * a >= b for a, b in zip(shifted, shifted[1:]))


def _as_utility(u, objects: Sequence[str]) -> UtilityFn:
    return u if isinstance(u, UtilityFn) else UtilityFn.from_vector(objects, u)


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def sample_urbi(t: PrefOrder, r, seed=None, floor=Fraction(1, 1000)) -> UtilityFn:
    """Random utility in URBI(r) consistent with ``t``; min 0, max 1.

    Each ratio between adjacent nonzero values is drawn uniformly from
    [floor * r, r]; the floats are converted exactly and clamped to r.
    """
    r = as_fraction(r)
    if not 0 < r <= 1:
        raise ValueError(f"bound r={r} outside (0, 1]")
    rng = _rng(seed)
    m = len(t)
    vals = [Fraction(0)] * m
    if m >= 2:
        vals[m - 2] = Fraction(1)
    for k in range(m - 3, -1, -1):
        while True:
            ratio = min(Fraction(float(rng.uniform(float(floor * r), float(r)))), r)
            if 0 < ratio < 1:
                break
        vals[k] = vals[k + 1] / ratio
    top = vals[0] if vals[0] > 0 else Fraction(1)
    return UtilityFn({o: v / top for o, v in zip(t.ranking, vals)})


def urbi_share(r, samples: int, seed=None) -> tuple[float, float]:
    """Monte Carlo share of three-object utilities (min 0) inside URBI(r).

    First and second choice values are uniform on the unit square above
    the diagonal. Returns (estimate, standard error).
    """
    if samples <= 0:
        raise ValueError(f"samples must be positive, got {samples}")
    r = float(as_fraction(r))
    rng = _rng(seed)
    pts = rng.random((samples, 2))
    first, second = pts.max(axis=1), pts.min(axis=1)
    hits = (r * first >= second).astype(float)
    est = float(hits.mean())
    return est, math.sqrt(est * (1 - est) / samples)


# --- deltas and polynomials -------------------------------------------------

@dataclass(frozen=True)
class Constraint:
    """Provenance of one incentive constraint: agent, profile, misreport, rank."""

    agent: int
    profile: tuple
    misreport: PrefOrder
    rank: int | None = None

    @property
    def truthful(self) -> PrefOrder:
        return self.profile[self.agent]

    def deviated_profile(self) -> tuple:
        p = list(self.profile)
        p[self.agent] = self.misreport
        return tuple(p)

    def to_dict(self) -> dict:
        d = {
            "agent": self.agent,
            "profile": [list(t.ranking) for t in self.profile],
            "misreport": list(self.misreport.ranking),
        }
        if self.rank is not None:
            d["rank"] = self.rank
        return d


@dataclass(frozen=True)
class DeltaVector:
    objects: tuple[str, ...]
    values: tuple[Fraction, ...]

    def __getitem__(self, obj: str) -> Fraction:
        return self.values[self.objects.index(obj)]

    def as_dict(self) -> dict:
        return dict(zip(self.objects, self.values))

    def is_zero(self) -> bool:
        return not any(self.values)


@dataclass(frozen=True)
class IndiffPoly:
    """Polynomial in s, ``coeffs[j]`` multiplies ``s**j``."""

    coeffs: tuple[Fraction, ...]
    source: Constraint | None = None

    def __call__(self, s) -> Fraction:
        return poly.evaluate(self.coeffs, as_fraction(s))

    @property
    def degree(self) -> int:
        return poly.degree(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self):
        terms = [f"({c})*s^{j}" for j, c in enumerate(self.coeffs) if c]
        return " + ".join(reversed(terms)) or "0"


def _full_profile(i: int, t_i, t_rest) -> tuple:
    rest = list(t_rest)
    return tuple(rest[:i]) + (t_i,) + tuple(rest[i:])


def _parse(setting: Setting, t) -> PrefOrder:
    from .mechanisms import parse_key

    return parse_key(setting, [t], 1)[0]


def delta_vector(f: Mechanism, setting: Setting, i: int, t_i, t_i_mis, t_rest) -> DeltaVector:
    """Agent i's truthful row minus its misreport row, others reporting ``t_rest``.

    ``t_rest`` lists the other n-1 reports in agent order.
    """
    t_i, t_i_mis = _parse(setting, t_i), _parse(setting, t_i_mis)
    t_rest = [_parse(setting, t) for t in t_rest]
    if len(t_rest) != setting.n - 1:
        raise InvalidPreference(f"expected {setting.n - 1} other reports, got {len(t_rest)}")
    x = f.allocate(setting, _full_profile(i, t_i, t_rest)).row(i)
    y = f.allocate(setting, _full_profile(i, t_i_mis, t_rest)).row(i)
    return DeltaVector(setting.objects, tuple(a - b for a, b in zip(x, y)))


def _coeff_chain(delta: Sequence[Fraction], ordered_idx: Sequence[int]) -> list[tuple]:
    """Coefficient tuples of x_1..x_{m-1}, delta indexed by object position."""
    out = []
    cur: tuple = ()
    for j in ordered_idx[:-1]:
        cur = (delta[j],) + cur
        out.append(cur)
    return out


def horner_polys(delta: DeltaVector, t_i: PrefOrder, source: Constraint | None = None) -> list[IndiffPoly]:
    """x_1..x_{m-1} for the given delta along the preference order ``t_i``."""
    idx = [delta.objects.index(o) for o in t_i.ranking]
    chain = _coeff_chain(delta.values, idx)
    polys = []
    for k, c in enumerate(chain, start=1):
        src = None if source is None else Constraint(source.agent, source.profile, source.misreport, k)
        polys.append(IndiffPoly(c, src))
    return polys


def manipulation_gain(f: Mechanism, setting: Setting, i: int, t_i, t_i_mis, t_rest, u) -> Fraction:
    """Expected-utility gain of reporting ``t_i_mis`` instead of ``t_i`` (positive = beneficial)."""
    t_i = _parse(setting, t_i)
    u = _as_utility(u, setting.objects)
    if not utility_consistent(u, t_i):
        raise InvalidPreference(f"utility {u.values} is not consistent with {t_i}")
    d = delta_vector(f, setting, i, t_i, t_i_mis, t_rest)
    return -sum((u[o] * x for o, x in zip(d.objects, d.values)), Fraction(0))


def _gain(f, setting, c: Constraint, u: UtilityFn) -> Fraction:
    rest = c.profile[: c.agent] + c.profile[c.agent + 1 :]
    return manipulation_gain(f, setting, c.agent, c.truthful, c.misreport, rest, u)


def witness_utility(t: PrefOrder, r, rank: int, scale=WITNESS_SCALE) -> UtilityFn:
    """URBI(r) utility that exposes a negative x_rank(1/r).

    Values: last choice 0, second to last 1, each step up multiplies by
    s = 1/r, except the step into rank ``rank`` which is additionally
    multiplied by ``scale``. For rank m-1 there is no such step and the
    plain geometric utility is used. At r = 1 the steps become 1 + 1/scale
    so that values stay distinct.
    """
    s = 1 / as_fraction(r)
    if s == 1:
        s += Fraction(1, scale)
    m = len(t)
    vals = [Fraction(0)] * m
    vals[m - 2] = Fraction(1)
    for k in range(m - 3, -1, -1):
        step = s * scale if k + 1 == rank else s
        vals[k] = vals[k + 1] * step
    return UtilityFn(dict(zip(t.ranking, vals)))


# --- verification -----------------------------------------------------------

@dataclass
class PSPResult:
    holds: bool
    r: Fraction
    witness: Constraint | None
    value: Fraction | None
    utility: UtilityFn | None
    gain: Fraction | None
    constraints: int
    coverage: str
    skipped: int = 0
    symmetry: str = "none"

    def __bool__(self):
        return self.holds

    def to_dict(self, setting: Setting) -> dict:
        d = {
            "r": fmt(self.r),
            "holds": self.holds,
            "constraints": self.constraints,
            "coverage": self.coverage,
            "skipped": self.skipped,
            "symmetry": self.symmetry,
            "witness": None,
        }
        if self.witness is not None:
            d["witness"] = self.witness.to_dict()
            d["witness"]["x_k(1/r)"] = fmt(self.value)
            d["witness"]["utility"] = {o: fmt(self.utility[o]) for o in setting.objects}
            d["witness"]["gain"] = fmt(self.gain)
        return d

    def __str__(self):
        s = f"r={self.r}: {'r-partially strategyproof' if self.holds else 'NOT r-partially strategyproof'}"
        s += f" ({self.constraints} constraints, {self.coverage} coverage, symmetry={self.symmetry})"
        if self.witness is not None:
            w = self.witness
            s += (
                f"\n  agent {w.agent + 1} of type {w.truthful} reporting {w.misreport}"
                f" against {[str(t) for t in w.profile]}: x_{w.rank}(1/r) = {self.value}"
                f"\n  witness utility {[str(self.utility[o]) for o in w.truthful.ranking]}"
                f" gains {self.gain} (~{float(self.gain):.3g})"
            )
        return s


def _positions(setting: Setting, t: PrefOrder) -> list[int]:
    return [setting.index(o) for o in t.ranking]


def _verify_chunk(args):
    (mech, setting, s, oracle, type_cap), chunk = args

    def visit(i, prof, t, tp, k, x, y):
        if x == y:
            return None
        acc = Fraction(0)
        for rank, j in enumerate(_positions(setting, t)[:-1], start=1):
            acc = acc * s + (x[j] - y[j])
            if acc < 0:
                return rank, acc
        return None

    return scan(mech, setting, chunk, False, visit, oracle, type_cap)


def _bound(r) -> Fraction:
    r = as_fraction(r)
    if not 0 < r <= 1:
        raise ValueError(f"bound r={r} outside (0, 1]")
    return r


def _oracle(f, setting, oracle, workers):
    if workers > 1:
        return None
    return oracle if oracle is not None else RowOracle(f, setting)


def verify_psp(
    f: Mechanism,
    setting: Setting,
    r,
    *,
    symmetry: str | None = None,
    profiles=None,
    workers: int = 1,
    oracle: RowOracle | None = None,
    type_cap: int = DEFAULT_TYPE_CAP,
    profile_cap: int = DEFAULT_PROFILE_CAP,
) -> PSPResult:
    """Check x_k(1/r) >= 0 over every agent, profile, misreport and rank.

    On failure the first violated constraint is reported together with a
    utility in URBI(r) for which the misreport is strictly beneficial.
    """
    r = _bound(r)
    s = 1 / r
    srcs, used = sources(f, setting, symmetry, profiles, type_cap, profile_cap)
    payload = (f, setting, s, _oracle(f, setting, oracle, workers), type_cap)
    hit, evaluated, skipped = merge(run_chunks(_verify_chunk, payload, srcs, workers))
    partial = skipped > 0 or used == "restricted" or (
        isinstance(f, TableMechanism) and f.partial
    )
    coverage = "partial" if partial else "full"
    if hit is None:
        return PSPResult(True, r, None, None, None, None, evaluated, coverage, skipped, used)
    (idx, agent, pos), (rank, value) = hit
    src = next(x for x in srcs if x.index == idx)
    prof = src.profile
    from .enumeration import all_types

    tp = all_types(setting, type_cap)[pos]
    c = Constraint(agent, prof, tp, rank)
    u, gain = _witness(f, setting, c, r)
    return PSPResult(False, r, c, value, u, gain, evaluated, coverage, skipped, used)


def _witness(f, setting, c: Constraint, r, scale=WITNESS_SCALE, attempts=20):
    """Escalate the scale factor until the manipulation is strictly beneficial."""
    for _ in range(attempts):
        u = witness_utility(c.truthful, r, c.rank, scale)
        gain = _gain(f, setting, c, u)
        if gain > 0:
            return u, gain
        scale *= 1000
    raise RuntimeError(f"no beneficial witness utility found for {c}")


# --- degree of strategyproofness ----------------------------------------------

@dataclass
class RhoResult:
    """rho exactly, or certified to lie in [lo, hi]."""

    lo: Fraction
    hi: Fraction
    exact: bool
    binding: Constraint | None
    binding_poly: tuple | None
    constraints: int
    symmetry: str
    coverage: str = "full"
    seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def value(self) -> Fraction | None:
        return self.lo if self.exact else None

    def contains(self, r) -> bool:
        return self.lo <= as_fraction(r) <= self.hi

    def to_dict(self) -> dict:
        d = {
            "value": fmt(self.lo) if self.exact else None,
            "interval": [fmt(self.lo), fmt(self.hi)],
            "exact": self.exact,
            "binding": self.binding.to_dict() if self.binding else None,
            "binding_poly": [fmt(c) for c in self.binding_poly] if self.binding_poly else None,
            "constraints": self.constraints,
            "symmetry": self.symmetry,
            "coverage": self.coverage,
            "seconds": round(self.seconds, 3),
        }
        d.update(self.extra)
        return d

    def __str__(self):
        if self.exact:
            s = f"rho = {self.lo} (exact)"
        else:
            s = f"rho in [{self.lo}, {self.hi}] (~{float(self.lo):.12g}, certified interval)"
        s += f"; {self.constraints} constraints, symmetry={self.symmetry}, {self.coverage} coverage"
        if self.binding is not None:
            b = self.binding
            s += (
                f"\n  binding: agent {b.agent + 1} of type {b.truthful} reporting {b.misreport}"
                f" against {[str(t) for t in b.profile]}, rank {b.rank}"
            )
        return s


class _Best:
    """Largest sign-change root seen so far; ties keep the earliest constraint."""

    def __init__(self):
        self.root: poly.RealRoot | None = None
        self.key = None
        self.constraint = None
        self.coeffs = None

    def offer(self, root, key, constraint, coeffs):
        if self.root is not None:
            cmp = root.compare(self.root)
            if cmp < 0 or (cmp == 0 and key > self.key):
                return
        self.root, self.key, self.constraint, self.coeffs = root, key, constraint, coeffs


def _rho_chunk(args):
    (mech, setting, oracle, type_cap), chunk = args
    from .enumeration import all_types

    position = {t: p for p, t in enumerate(all_types(setting, type_cap))}
    cache: dict = {}
    best = _Best()
    bad = []

    def visit(i, prof, t, tp, k, x, y):
        if x == y:
            return None
        delta = [a - b for a, b in zip(x, y)]
        for rank, coeffs in enumerate(_coeff_chain(delta, _positions(setting, t)), start=1):
            c = poly.trim(coeffs)
            if not c or all(v >= 0 for v in c):
                continue  # no positive root
            if c[-1] < 0:
                bad.append(Constraint(i, prof, tp, rank))
                return True
            if c not in cache:
                cache[c] = poly.sign_change_root(c)
            root = cache[c]
            if root is not None:
                best.offer(root, (current[0], i, position[tp], rank), Constraint(i, prof, tp, rank), c)
        return None

    current = [None]
    counts_all = []
    for src in chunk:
        current[0] = src.index
        hit, counts = scan(mech, setting, [src], False, visit, oracle, type_cap)
        counts_all.extend(counts)
        if hit is not None:
            return ("unbounded", bad[0], counts_all)
    return ("ok", (best.root, best.key, best.constraint, best.coeffs), counts_all)


def compute_rho(
    f: Mechanism,
    setting: Setting,
    *,
    symmetry: str | None = None,
    profiles=None,
    workers: int = 1,
    check_precondition: bool = True,
    oracle: RowOracle | None = None,
    width=poly.DEFAULT_WIDTH,
    type_cap: int = DEFAULT_TYPE_CAP,
    profile_cap: int = DEFAULT_PROFILE_CAP,
) -> RhoResult:
    """Largest r in (0, 1] for which ``f`` is r-partially strategyproof.

    Every constraint polynomial with a sign-change root s0 >= 1 caps rho at
    1/s0. Rational roots are found exactly; irrational binding roots give a
    certified interval of width <= ``width`` in s.
    """
    start = time.perf_counter()
    oracle = _oracle(f, setting, oracle, workers)
    kw = dict(
        symmetry=symmetry,
        profiles=profiles,
        workers=workers,
        type_cap=type_cap,
        profile_cap=profile_cap,
        oracle=oracle,
    )
    if check_precondition:
        for check in (check_swap_monotonicity, check_upper_invariance):
            rep = check(f, setting, **kw)
            if not rep.holds:
                raise PreconditionError(rep)
    srcs, used = sources(f, setting, symmetry, profiles, type_cap, profile_cap)
    payload = (f, setting, oracle, type_cap)
    parts = run_chunks(_rho_chunk, payload, srcs, workers)
    total = sum(e for p in parts for _, e, _ in p[2])
    skipped = sum(sk for p in parts for _, _, sk in p[2])
    unbounded = [p[1] for p in parts if p[0] == "unbounded"]
    if unbounded:
        c = unbounded[0]
        raise ValueError(
            f"constraint negative for every r in (0, 1]: agent {c.agent + 1} reporting {c.misreport}"
            f" against {[str(t) for t in c.profile]}, rank {c.rank}"
        )
    best = _Best()
    for _, (root, key, constraint, coeffs), _ in parts:
        if root is not None:
            best.offer(root, key, constraint, coeffs)
    partial = skipped > 0 or used == "restricted" or (isinstance(f, TableMechanism) and f.partial)
    coverage = "partial" if partial else "full"
    elapsed = time.perf_counter() - start
    if best.root is None or (best.root.exact is not None and best.root.exact <= 1):
        return RhoResult(Fraction(1), Fraction(1), True, None, None, total, used, coverage, elapsed)
    root = best.root
    root.identify()
    if root.exact is not None:
        rho = 1 / root.exact
        return RhoResult(rho, rho, True, best.constraint, best.coeffs, total, used, coverage, elapsed)
    root.refine(width)
    lo, hi = 1 / root.hi, min(Fraction(1), 1 / max(root.lo, Fraction(1)))
    return RhoResult(lo, hi, False, best.constraint, best.coeffs, total, used, coverage, elapsed)


def certify(result: RhoResult, f: Mechanism, setting: Setting, eps=Fraction(1, 10**9), **kw) -> bool:
    """verify_psp holds at the lower end and the binding constraint fails just above the upper end."""
    if not verify_psp(f, setting, result.lo, **kw):
        return False
    if result.binding is None:
        return result.hi == 1
    above = result.hi + eps
    if above > 1:
        return True
    return poly.evaluate(result.binding_poly, 1 / above) < 0


def rho_bisect(
    f: Mechanism,
    setting: Setting,
    tol=Fraction(1, 10**6),
    *,
    check_precondition: bool = True,
    **kw,
) -> tuple[Fraction, Fraction]:
    """[lo, hi] with verify_psp true at lo, false at hi (lo == hi == 1 when strategyproof)."""
    tol = as_fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    kw["oracle"] = _oracle(f, setting, kw.get("oracle"), kw.get("workers", 1))
    if check_precondition:
        for check in (check_swap_monotonicity, check_upper_invariance):
            rep = check(f, setting, **kw)
            if not rep.holds:
                raise PreconditionError(rep)
    if verify_psp(f, setting, 1, **kw):
        return Fraction(1), Fraction(1)
    hi = Fraction(1)
    lo = Fraction(1, 2)
    while not verify_psp(f, setting, lo, **kw):
        hi, lo = lo, lo / 2
        if lo < Fraction(1, 2**64):
            raise RuntimeError("no positive bound found; mechanism looks not partially strategyproof")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if verify_psp(f, setting, mid, **kw):
            lo = mid
        else:
            hi = mid
    return lo, hi


# --- maximality construction --------------------------------------------------

def violating_pair(u: UtilityFn, r) -> tuple[str, str, Fraction]:
    """Highest adjacent pair (a, b) with (u(b) - min) / (u(a) - min) > r, b not last."""
    r = as_fraction(r)
    t = u.order()
    low = u.min
    for k in range(1, len(t) - 1):
        a, b = t.ch(k), t.ch(k + 1)
        ratio = (u[b] - low) / (u[a] - low)
        if ratio > r:
            return a, b, ratio
    raise ValueError(f"no violating pair: utility satisfies URBI({r})")


def maximality_counterexample(setting: Setting, r, u_viol, agent: int = 0) -> TableMechanism:
    """An r-partially strategyproof mechanism that an agent with ``u_viol`` manipulates.

    The designated agent gets the uniform row when its report ranks a above
    b, where (a, b) is a violating adjacent pair of ``u_viol``. Otherwise it
    gets that row shifted by delta_b = 1/(2m) on b, delta_a = -r * delta_b on a
    and -(delta_a + delta_b) on its reported last choice. Other agents share
    the remaining supply evenly; nothing depends on their reports.
    """
    from .enumeration import all_types

    r = as_fraction(r)
    m, n = setting.m, setting.n
    if m < 3:
        raise ValueError(f"needs at least 3 objects, setting has {m}")
    if not 0 < r < 1:
        raise ValueError(f"bound r={r} must lie in (0, 1)")
    u = _as_utility(u_viol, setting.objects)
    a, b, _ = violating_pair(u, r)
    db = Fraction(1, 2 * m)
    da = -r * db
    dd = -da - db
    total = sum(setting.q)
    target = [Fraction(n * c, total) for c in setting.q]
    entries = {}
    for t in all_types(setting):
        row = [Fraction(1, m)] * m
        if t.prefers(b, a):
            row[setting.index(a)] += da
            row[setting.index(b)] += db
            row[setting.index(t.ch(m))] += dd
        others = [(target[j] - row[j]) / (n - 1) for j in range(m)] if n > 1 else None
        probs = [others] * n if n > 1 else [row]
        probs[agent] = row
        entries[(t,)] = Allocation(probs).validate(setting)
    return TableMechanism(
        setting, entries, None, name=f"maximality(r={r},{a}/{b})", keyed_by=(agent,)
    )


@dataclass
class CounterexampleCheck:
    r: Fraction
    verify: PSPResult
    truthful: PrefOrder
    misreport: PrefOrder
    gain: Fraction

    @property
    def ok(self) -> bool:
        return self.verify.holds and self.gain > 0

    def to_dict(self, setting: Setting) -> dict:
        return {
            "r": fmt(self.r),
            "verify_psp": self.verify.to_dict(setting),
            "truthful": str(self.truthful),
            "misreport": str(self.misreport),
            "gain": fmt(self.gain),
            "ok": self.ok,
        }


def check_counterexample(table: TableMechanism, setting: Setting, r, u_viol) -> CounterexampleCheck:
    """Run verify_psp at r and the a/b swap gain at ``u_viol`` on a generated table."""
    r = as_fraction(r)
    u = _as_utility(u_viol, setting.objects)
    t = u.order()
    a, b, _ = violating_pair(u, r)
    agent = table.keyed_by[0]
    tp = t.swap(t.rank(a))
    rest = [t] * (setting.n - 1)
    gain = manipulation_gain(table, setting, agent, t, tp, rest, u)
    return CounterexampleCheck(r, verify_psp(table, setting, r), t, tp, gain)
