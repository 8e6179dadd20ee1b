"""One-sided matching mechanisms as exact maps from profiles to allocations."""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import (
    Allocation,
    InvalidAllocation,
    InvalidPreference,
    PrefOrder,
    Setting,
    as_fraction,
    check_pref,
)
from .enumeration import CapExceeded

DEFAULT_ORDER_CAP = math.factorial(10)


class MissingProfile(KeyError):
    """A partial table has no entry for the requested profile."""


def _idx(setting: Setting, profile) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(setting.index(o) for o in t.ranking) for t in profile)


def _zeros(n, m):
    return [[Fraction(0)] * m for _ in range(n)]


def _check_orders(n: int, cap: int, name: str):
    if math.factorial(n) > cap:
        raise CapExceeded(f"{name}: {n}! priority orders", math.factorial(n), cap)


class Mechanism:
    """Base class. Subclasses implement ``_allocate(setting, profile)``."""

    name = "mechanism"
    anonymous = False
    neutral = False

    def allocate(self, setting: Setting, profile) -> Allocation:
        return self._allocate(setting, tuple(profile))

    __call__ = allocate

    def _allocate(self, setting, profile) -> Allocation:
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


# --- random serial dictatorship ---------------------------------------------

def rsd(setting: Setting, profile, order_cap: int = DEFAULT_ORDER_CAP) -> Allocation:
    """Exact RSD probabilities.

    A uniformly random priority order is generated agent by agent, so the
    average over all n! orders is a recursion over (remaining agents,
    remaining capacities) and is memoized on that state.
    """
    n, m = setting.n, setting.m
    _check_orders(n, order_cap, "rsd")
    prefs = _idx(setting, profile)

    @lru_cache(maxsize=None)
    def value(mask: int, caps: tuple[int, ...]):
        out = {}
        agents = [a for a in range(n) if mask >> a & 1]
        if not agents:
            return out
        w = Fraction(1, len(agents))
        for a in agents:
            j = next(j for j in prefs[a] if caps[j] > 0)
            sub = value(mask & ~(1 << a), caps[:j] + (caps[j] - 1,) + caps[j + 1 :])
            out[(a, j)] = out.get((a, j), 0) + w
            for key, p in sub.items():
                out[key] = out.get(key, 0) + w * p
        return out

    probs = _zeros(n, m)
    for (a, j), p in value((1 << n) - 1, setting.q).items():
        probs[a][j] = Fraction(p)
    return Allocation(probs)


# --- probabilistic serial ---------------------------------------------------

def ps(setting: Setting, profile) -> Allocation:
    """Simultaneous eating at unit speed, simulated event by event."""
    n, m = setting.n, setting.m
    prefs = _idx(setting, profile)
    left = [Fraction(c) for c in setting.q]
    probs = _zeros(n, m)
    t = Fraction(0)
    while t < 1:
        target = [next(j for j in prefs[i] if left[j] > 0) for i in range(n)]
        eaters = [0] * m
        for j in target:
            eaters[j] += 1
        dt = 1 - t
        for j in range(m):
            if eaters[j]:
                dt = min(dt, left[j] / eaters[j])
        for i, j in enumerate(target):
            probs[i][j] += dt
            left[j] -= dt
        t += dt
    return Allocation(probs)


# --- Boston mechanisms ------------------------------------------------------

def _boston_once(prefs, caps, order, adaptive):
    n = len(prefs)
    caps = list(caps)
    result = [None] * n
    pointer = [0] * n
    unassigned = set(range(n))
    while unassigned:
        exhausted = [c == 0 for c in caps]
        applications = {}
        for i in unassigned:
            if adaptive:
                j = next(j for j in prefs[i] if not exhausted[j])
            else:
                j = prefs[i][pointer[i]]
                pointer[i] += 1
            applications.setdefault(j, []).append(i)
        for j, applicants in applications.items():
            applicants.sort(key=order.__getitem__)
            for i in applicants[: caps[j]]:
                result[i] = j
                unassigned.discard(i)
            caps[j] = max(0, caps[j] - len(applicants))
    return result


def _boston(setting, profile, adaptive, order_cap):
    n, m = setting.n, setting.m
    _check_orders(n, order_cap, "abm" if adaptive else "nbm")
    prefs = _idx(setting, profile)
    counts = [[0] * m for _ in range(n)]
    total = 0
    for perm in itertools.permutations(range(n)):
        # perm[i] is agent i's lottery number; lower wins
        for i, j in enumerate(_boston_once(prefs, setting.q, perm, adaptive)):
            counts[i][j] += 1
        total += 1
    return Allocation([[Fraction(c, total) for c in row] for row in counts])


def nbm(setting: Setting, profile, order_cap: int = DEFAULT_ORDER_CAP) -> Allocation:
    """Naive Boston: round k applications go to the k-th choice, exhausted or not."""
    return _boston(setting, profile, False, order_cap)


def abm(setting: Setting, profile, order_cap: int = DEFAULT_ORDER_CAP) -> Allocation:
    """Adaptive Boston: applications skip objects exhausted before the round."""
    return _boston(setting, profile, True, order_cap)


# --- rank-minimizing assignment ---------------------------------------------

@dataclass(frozen=True)
class RankMinResult:
    assignment: tuple[str, ...]
    total_rank: int
    unique: bool


def _min_cost(cost: np.ndarray) -> int:
    if cost.shape[0] == 0:
        return 0
    r, c = linear_sum_assignment(cost)
    return int(round(cost[r, c].sum()))


def rank_min_detail(setting: Setting, profile) -> RankMinResult:
    """Total-rank minimizing deterministic assignment.

    Among minimizers the lexicographically smallest (agent by agent, object
    by object in setting order) is returned; ``unique`` is exact.
    """
    n, m = setting.n, setting.m
    prefs = _idx(setting, profile)
    rank = [[0] * m for _ in range(n)]
    for i, p in enumerate(prefs):
        for k, j in enumerate(p):
            rank[i][j] = k + 1
    slots = [j for j in range(m) for _ in range(min(setting.q[j], n))]
    big = n * m + 1

    def cost_matrix(agents, caps):
        cols = [j for j in range(m) for _ in range(min(caps[j], n))]
        return np.array([[rank[i][j] for j in cols] for i in agents], dtype=float).reshape(
            len(agents), len(cols)
        )

    caps = list(setting.q)
    best = _min_cost(cost_matrix(range(n), caps))
    assignment = []
    spent = 0
    for i in range(n):
        rest = list(range(i + 1, n))
        for j in range(m):
            if caps[j] == 0:
                continue
            caps[j] -= 1
            if spent + rank[i][j] + _min_cost(cost_matrix(rest, caps)) == best:
                assignment.append(j)
                spent += rank[i][j]
                break
            caps[j] += 1
    unique = True
    full = np.array([[rank[i][j] for j in slots] for i in range(n)], dtype=float)
    for i, j in enumerate(assignment):
        forbidden = full.copy()
        forbidden[i, [c for c, jj in enumerate(slots) if jj == j]] = big
        if _min_cost(forbidden) == best:
            unique = False
            break
    return RankMinResult(tuple(setting.objects[j] for j in assignment), best, unique)


def rank_min(setting: Setting, profile) -> Allocation:
    res = rank_min_detail(setting, profile)
    probs = _zeros(setting.n, setting.m)
    for i, obj in enumerate(res.assignment):
        probs[i][setting.index(obj)] = Fraction(1)
    return Allocation(probs)


# --- mechanism objects ------------------------------------------------------

class BuiltinMechanism(Mechanism):
    _functions = {"rsd": rsd, "ps": ps, "nbm": nbm, "abm": abm, "rank_min": rank_min}

    def __init__(self, name: str):
        if name not in self._functions:
            raise ValueError(f"unknown mechanism {name!r}")
        self.name = name
        self.anonymous = self.neutral = name != "rank_min"

    def _allocate(self, setting, profile):
        return self._functions[self.name](setting, profile)

    def __reduce__(self):
        return (BuiltinMechanism, (self.name,))


class Hybrid(Mechanism):
    """(1 - beta) * f + beta * g."""

    def __init__(self, f: Mechanism, g: Mechanism, beta):
        beta = as_fraction(beta)
        if not 0 <= beta <= 1:
            raise ValueError(f"beta={beta} outside [0, 1]")
        self.f, self.g, self.beta = f, g, beta
        self.name = f"hybrid({f.name},{g.name},{beta})"
        self.anonymous = f.anonymous and g.anonymous
        self.neutral = f.neutral and g.neutral

    def _allocate(self, setting, profile):
        if self.beta == 0:
            return self.f.allocate(setting, profile)
        if self.beta == 1:
            return self.g.allocate(setting, profile)
        x = self.f.allocate(setting, profile).probs
        y = self.g.allocate(setting, profile).probs
        b = self.beta
        return Allocation(
            [[(1 - b) * a + b * c for a, c in zip(ra, rc)] for ra, rc in zip(x, y)]
        )


def hybrid(f: Mechanism, g: Mechanism, beta) -> Hybrid:
    return Hybrid(f, g, beta)


@dataclass
class TableMechanism(Mechanism):
    """Mechanism given by explicit allocation matrices.

    Without a default the table may be partial; missing profiles raise
    :class:`MissingProfile` and checkers skip the affected constraints.

    With ``keyed_by`` set, entries are keyed by the reports of those agents
    only and the allocation ignores everybody else's report.
    """

    setting: Setting
    entries: dict = field(default_factory=dict)
    default: Allocation | None = None
    anonymous: bool = False
    neutral: bool = False
    name: str = "table"
    keyed_by: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.keyed_by is not None:
            self.keyed_by = tuple(self.keyed_by)
            if not self.keyed_by or any(not 0 <= i < self.setting.n for i in self.keyed_by):
                raise ValueError(f"keyed_by={self.keyed_by} must name agents in 0..{self.setting.n - 1}")
        width = self.setting.n if self.keyed_by is None else len(self.keyed_by)
        for prof, alloc in self.entries.items():
            if len(prof) != width:
                raise InvalidAllocation(f"entry key {list(map(str, prof))} has {len(prof)} reports, expected {width}")
            try:
                alloc.validate(self.setting)
            except InvalidAllocation as exc:
                raise InvalidAllocation(f"entry {list(map(str, prof))}: {exc}") from None
        if self.default is not None:
            self.default.validate(self.setting)

    @property
    def key_width(self) -> int:
        return self.setting.n if self.keyed_by is None else len(self.keyed_by)

    @property
    def partial(self) -> bool:
        if self.default is not None:
            return False
        types = math.factorial(len(self.setting.real_objects))
        return len(self.entries) < types**self.key_width

    def key(self, profile) -> tuple:
        if self.keyed_by is None:
            return tuple(profile)
        return tuple(profile[i] for i in self.keyed_by)

    def _allocate(self, setting, profile):
        try:
            return self.entries[self.key(profile)]
        except KeyError:
            if self.default is not None:
                return self.default
            raise MissingProfile(tuple(map(str, profile))) from None

    def add(self, prefs, allocation) -> None:
        """Add an entry; ``prefs`` lists the keyed agents' reports when ``keyed_by`` is set."""
        key = parse_key(self.setting, prefs, self.key_width)
        alloc = allocation if isinstance(allocation, Allocation) else Allocation(allocation)
        self.entries[key] = alloc.validate(self.setting)

    def __eq__(self, other):
        return (
            isinstance(other, TableMechanism)
            and self.setting == other.setting
            and self.entries == other.entries
            and self.default == other.default
            and self.anonymous == other.anonymous
            and self.keyed_by == other.keyed_by
        )


def parse_key(setting: Setting, prefs, width: int) -> tuple:
    """Parse ``width`` reports (dummies appended when omitted)."""
    prefs = list(prefs)
    if len(prefs) != width:
        raise InvalidPreference(f"{len(prefs)} reports given, expected {width}")
    out = []
    for p in prefs:
        t = PrefOrder.parse(p)
        missing = [d for d in setting.dummies if d not in t.ranking]
        if missing:
            t = PrefOrder(t.ranking + tuple(missing))
        check_pref(setting, t)
        out.append(t)
    return tuple(out)


def constant(setting: Setting, allocation=None) -> TableMechanism:
    """Table mechanism returning the same allocation for every profile."""
    if allocation is None:
        total = sum(setting.q)
        allocation = [[Fraction(c, total) for c in setting.q] for _ in range(setting.n)]
    alloc = allocation if isinstance(allocation, Allocation) else Allocation(allocation)
    return TableMechanism(setting, {}, alloc, anonymous=True, neutral=True, name="constant")


_HYBRID = re.compile(r"^hybrid\((\w+),(\w+),([0-9/.]+)\)$")


def get_mechanism(name: str) -> Mechanism:
    """Look up a built-in by name; ``hybrid(f,g,beta)`` is also accepted."""
    name = name.replace(" ", "")
    m = _HYBRID.match(name)
    if m:
        return Hybrid(get_mechanism(m.group(1)), get_mechanism(m.group(2)), Fraction(m.group(3)))
    return BuiltinMechanism(name)


LIBRARY = ("rsd", "ps", "nbm", "abm", "rank_min", "hybrid(rsd,ps,1/2)", "hybrid(rsd,abm,1/2)")
