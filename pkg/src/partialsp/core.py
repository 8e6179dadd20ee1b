"""Settings, preference orders, allocations and utilities.

All probabilities are :class:`fractions.Fraction`. Objects are opaque string
labels; every vector indexed by objects follows ``Setting.objects`` order.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

DUMMY_PREFIX = "_dummy"


class InvalidSetting(ValueError):
    pass


class InvalidPreference(ValueError):
    pass


class InvalidAllocation(ValueError):
    pass


def as_fraction(value) -> Fraction:
    """Parse ints, Fractions, floats or ``"p/q"`` strings exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


@dataclass(frozen=True)
class Setting:
    n: int
    objects: tuple[str, ...]
    q: tuple[int, ...]
    dummies: tuple[str, ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "q", tuple(int(c) for c in self.q))
        object.__setattr__(self, "dummies", tuple(self.dummies))
        if self.n < 1:
            raise InvalidSetting(f"need at least one agent, got n={self.n}")
        if not self.objects:
            raise InvalidSetting("empty object list")
        if len(set(self.objects)) != len(self.objects):
            raise InvalidSetting(f"duplicate objects in {self.objects}")
        if len(self.q) != len(self.objects):
            raise InvalidSetting(f"{len(self.q)} capacities for {len(self.objects)} objects")
        if any(c < 1 for c in self.q):
            raise InvalidSetting(f"capacities must be positive, got {self.q}")
        if self.n > sum(self.q):
            raise InvalidSetting(f"n={self.n} exceeds total supply {sum(self.q)}")
        if not set(self.dummies) <= set(self.objects):
            raise InvalidSetting("dummy objects must be part of the object list")
        object.__setattr__(self, "_index", {o: j for j, o in enumerate(self.objects)})

    @property
    def m(self) -> int:
        return len(self.objects)

    @property
    def real_objects(self) -> tuple[str, ...]:
        return tuple(o for o in self.objects if o not in self.dummies)

    def index(self, obj: str) -> int:
        try:
            return self._index[obj]
        except KeyError:
            raise InvalidPreference(f"unknown object {obj!r}") from None

    @property
    def uniform_capacity(self) -> bool:
        return len(set(self.q)) == 1

    def to_dict(self) -> dict:
        d = {"n": self.n, "objects": list(self.objects), "q": list(self.q)}
        if self.dummies:
            d["dummies"] = list(self.dummies)
        return d

    def __str__(self):
        caps = "unit" if set(self.q) == {1} else ",".join(map(str, self.q))
        return f"{self.n} agents x {self.m} objects ({caps} capacity)"


def make_setting(n: int, objects: Sequence[str], q: Sequence[int] | int = 1) -> Setting:
    """Build a setting, appending one dummy object if supply falls short of n.

    ``q`` may be a single int, used for every object.
    """
    objects = [str(o) for o in objects]
    if not objects:
        raise InvalidSetting("empty object list")
    if isinstance(q, int):
        q = [q] * len(objects)
    q = list(q)
    if len(q) != len(objects):
        raise InvalidSetting(f"{len(q)} capacities for {len(objects)} objects")
    if any(c < 1 for c in q):
        raise InvalidSetting(f"capacities must be positive, got {q}")
    if n < 1:
        raise InvalidSetting(f"need at least one agent, got n={n}")
    dummies = ()
    shortfall = n - sum(q)
    if shortfall > 0:
        name = DUMMY_PREFIX
        while name in objects:
            name += "_"
        objects.append(name)
        q.append(shortfall)
        dummies = (name,)
    return Setting(n, tuple(objects), tuple(q), dummies)


def unit_setting(n: int, m: int | None = None) -> Setting:
    """``n`` agents and ``m`` unit-capacity objects labelled a, b, c, ..."""
    m = n if m is None else m
    return make_setting(n, [chr(ord("a") + j) for j in range(m)], 1)


@dataclass(frozen=True, order=True)
class PrefOrder:
    """A strict ranking; ``ranking[0]`` is the first choice."""

    ranking: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "ranking", tuple(self.ranking))
        if len(set(self.ranking)) != len(self.ranking):
            raise InvalidPreference(f"repeated object in {self.ranking}")

    @classmethod
    def parse(cls, text: str | Sequence[str]) -> "PrefOrder":
        if isinstance(text, PrefOrder):
            return text
        if isinstance(text, str):
            for sep in (">", "≻", ","):
                if sep in text:
                    return cls(tuple(p.strip() for p in text.split(sep)))
            return cls(tuple(text.split()) if " " in text.strip() else tuple(text.strip()))
        return cls(tuple(text))

    def __len__(self):
        return len(self.ranking)

    def __iter__(self):
        return iter(self.ranking)

    def ch(self, k: int) -> str:
        """k-th choice, 1-indexed."""
        if not 1 <= k <= len(self.ranking):
            raise IndexError(f"rank {k} outside 1..{len(self.ranking)}")
        return self.ranking[k - 1]

    def rank(self, obj: str) -> int:
        """1-indexed position of ``obj``."""
        try:
            return self.ranking.index(obj) + 1
        except ValueError:
            raise InvalidPreference(f"{obj!r} not ranked in {self}") from None

    def prefers(self, a: str, b: str) -> bool:
        return self.rank(a) < self.rank(b)

    def swap(self, k: int) -> "PrefOrder":
        """Swap the objects at ranks k and k+1 (1-indexed)."""
        r = list(self.ranking)
        r[k - 1], r[k] = r[k], r[k - 1]
        return PrefOrder(tuple(r))

    def __str__(self):
        return ">".join(self.ranking)


def pref(text) -> PrefOrder:
    return PrefOrder.parse(text)


Profile = tuple  # tuple[PrefOrder, ...]


def make_profile(setting: Setting, prefs: Iterable) -> Profile:
    """Parse and validate a profile; dummy objects are appended when omitted."""
    out = []
    for p in prefs:
        t = PrefOrder.parse(p)
        missing = [d for d in setting.dummies if d not in t.ranking]
        if missing:
            t = PrefOrder(t.ranking + tuple(missing))
        check_pref(setting, t)
        out.append(t)
    if len(out) != setting.n:
        raise InvalidPreference(f"profile has {len(out)} reports, setting has n={setting.n}")
    return tuple(out)


def check_pref(setting: Setting, t: PrefOrder) -> None:
    if sorted(t.ranking) != sorted(setting.objects):
        raise InvalidPreference(f"{t} is not a ranking of {setting.objects}")


@dataclass(frozen=True)
class Allocation:
    """n x m matrix of exact assignment probabilities."""

    probs: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "probs", tuple(tuple(as_fraction(x) for x in row) for row in self.probs)
        )

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.probs[i]

    def __getitem__(self, ij):
        i, j = ij
        return self.probs[i][j]

    @property
    def shape(self):
        return (len(self.probs), len(self.probs[0]) if self.probs else 0)

    def validate(self, setting: Setting) -> "Allocation":
        if self.shape != (setting.n, setting.m):
            raise InvalidAllocation(f"shape {self.shape} != ({setting.n}, {setting.m})")
        for i, row in enumerate(self.probs):
            for j, x in enumerate(row):
                if not 0 <= x <= 1:
                    raise InvalidAllocation(f"entry ({i},{setting.objects[j]})={x} outside [0,1]")
            if sum(row) != 1:
                raise InvalidAllocation(f"row {i} sums to {sum(row)}, not 1")
        for j, cap in enumerate(setting.q):
            col = sum(row[j] for row in self.probs)
            if col > cap:
                raise InvalidAllocation(
                    f"column {setting.objects[j]} sums to {col} > capacity {cap}"
                )
        return self

    def is_deterministic(self) -> bool:
        return all(x in (0, 1) for row in self.probs for x in row)

    def __str__(self):
        return "\n".join(" ".join(f"{str(x):>6}" for x in row) for row in self.probs)


@dataclass(frozen=True)
class UtilityFn:
    values: Mapping[str, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "values", {k: as_fraction(v) for k, v in self.values.items()})

    @classmethod
    def from_vector(cls, objects: Sequence[str], vector: Sequence) -> "UtilityFn":
        return cls(dict(zip(objects, vector)))

    def __getitem__(self, obj):
        return self.values[obj]

    @property
    def min(self) -> Fraction:
        return min(self.values.values())

    def vector(self, objects: Sequence[str]) -> tuple[Fraction, ...]:
        return tuple(self.values[o] for o in objects)

    def order(self) -> PrefOrder:
        """The preference order this utility induces (requires distinct values)."""
        if len(set(self.values.values())) != len(self.values):
            raise InvalidPreference("utility has ties; no strict order")
        return PrefOrder(tuple(sorted(self.values, key=self.values.__getitem__, reverse=True)))


def neighborhood(t: PrefOrder) -> list[PrefOrder]:
    """All orders one adjacent swap away, by swap position k = 1..m-1."""
    return [t.swap(k) for k in range(1, len(t))]


def contour_sets(t: PrefOrder, a: str) -> tuple[frozenset, frozenset]:
    k = t.rank(a)
    return frozenset(t.ranking[: k - 1]), frozenset(t.ranking[k:])


def canonical_transition(t_from: PrefOrder, t_to: PrefOrder) -> list[PrefOrder]:
    """Adjacent-swap path that bubbles t_to's k-th choice into place for k = 1, 2, ..."""
    if sorted(t_from.ranking) != sorted(t_to.ranking):
        raise InvalidPreference(f"{t_from} and {t_to} rank different objects")
    path = [t_from]
    cur = t_from
    for target, obj in enumerate(t_to.ranking, start=1):
        pos = cur.rank(obj)
        while pos > target:
            cur = cur.swap(pos - 1)
            path.append(cur)
            pos -= 1
    return path


class Dominance(enum.Enum):
    DOMINATES_STRICTLY = "dominates_strictly"
    EQUAL = "equal"
    DOMINATED = "dominated"
    INCOMPARABLE = "incomparable"

    @property
    def weakly_dominates(self) -> bool:
        return self in (Dominance.DOMINATES_STRICTLY, Dominance.EQUAL)


def _ordered(row, t: PrefOrder, objects):
    if isinstance(row, Mapping):
        return [as_fraction(row[o]) for o in t.ranking]
    if objects is None:
        objects = sorted(t.ranking)
    pos = {o: j for j, o in enumerate(objects)}
    return [as_fraction(row[pos[o]]) for o in t.ranking]


def fosd_compare(x, y, t: PrefOrder, objects: Sequence[str] | None = None) -> Dominance:
    """First-order stochastic dominance of row ``x`` over row ``y`` w.r.t. ``t``.

    Rows are either mappings object -> probability or sequences indexed by
    ``objects`` (default: sorted object labels).
    """
    xs, ys = _ordered(x, t, objects), _ordered(y, t, objects)
    cx = cy = Fraction(0)
    ge = le = True
    for a, b in zip(xs, ys):
        cx += a
        cy += b
        if cx < cy:
            ge = False
        elif cx > cy:
            le = False
    if ge and le:
        return Dominance.EQUAL
    if ge:
        return Dominance.DOMINATES_STRICTLY
    if le:
        return Dominance.DOMINATED
    return Dominance.INCOMPARABLE


def expected_utility(u: UtilityFn | Sequence, row, objects: Sequence[str] | None = None) -> Fraction:
    if isinstance(u, UtilityFn):
        if isinstance(row, Mapping):
            return sum((u[o] * as_fraction(p) for o, p in row.items()), Fraction(0))
        objects = objects if objects is not None else sorted(u.values)
        return sum((u[o] * as_fraction(p) for o, p in zip(objects, row)), Fraction(0))
    return sum((as_fraction(a) * as_fraction(b) for a, b in zip(u, row)), Fraction(0))


def utility_consistent(u: UtilityFn, t: PrefOrder) -> bool:
    vals = [u[o] for o in t.ranking]
    return all(a > b for a, b in zip(vals, vals[1:]))


_NAMED = re.compile(r"^(\d+)x(\d+)unit$")


def named_setting(name: str) -> Setting:
    """``"3x3unit"`` style names: n agents, m unit-capacity objects."""
    m = _NAMED.match(name.strip())
    if not m:
        raise InvalidSetting(f"unknown setting name {name!r}; expected e.g. '3x3unit'")
    return unit_setting(int(m.group(1)), int(m.group(2)))
