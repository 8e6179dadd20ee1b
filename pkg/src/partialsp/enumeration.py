"""Type-space and profile enumeration with anonymity/neutrality reductions.

Reductions follow the agent-centric view used by the checkers:

* ``none`` -- every ordered profile, every agent is a focal agent.
* ``anonymous`` -- one sorted profile per multiset of types; the focal
  agents are the first holder of each distinct type.
* ``anonymous_neutral`` -- the focal agent (agent 0) reports the reference
  order ``a_1 > ... > a_m``, the other n-1 reports form a multiset.  Every
  (agent, profile) pair is a relabelling of exactly one such class.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

from .core import PrefOrder, Setting

SYMMETRIES = ("none", "anonymous", "anonymous_neutral")

DEFAULT_TYPE_CAP = 720
DEFAULT_PROFILE_CAP = 10**8


class CapExceeded(RuntimeError):
    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: {size:,} exceeds cap {cap:,} (raise the cap to force)")
        self.size = size
        self.cap = cap


class SymmetryError(ValueError):
    pass


@dataclass(frozen=True)
class ProfileClass:
    representative: tuple
    multiplicity: int
    index: int
    focal: tuple[int, ...]

    def expanded(self) -> int:
        return self.multiplicity


def type_count(setting: Setting) -> int:
    return math.factorial(len(setting.real_objects))


def all_types(setting: Setting, cap: int = DEFAULT_TYPE_CAP) -> list[PrefOrder]:
    """All strict orders over the real objects, lexicographic in object-list order.

    Dummy objects are appended, in setting order, to every ranking.
    """
    size = type_count(setting)
    if size > cap:
        raise CapExceeded(f"type space of {len(setting.real_objects)} objects", size, cap)
    real = setting.real_objects
    return [PrefOrder(p + setting.dummies) for p in itertools.permutations(real)]


def _multinomial(counts: Iterable[int]) -> int:
    counts = list(counts)
    out = math.factorial(sum(counts))
    for c in counts:
        out //= math.factorial(c)
    return out


def class_count(setting: Setting, symmetry: str) -> int:
    k, n = type_count(setting), setting.n
    if symmetry == "none":
        return k**n
    if symmetry == "anonymous":
        return math.comb(k + n - 1, n)
    if symmetry == "anonymous_neutral":
        return math.comb(k + n - 2, n - 1)
    raise SymmetryError(f"unknown symmetry {symmetry!r}")


def check_symmetry(setting: Setting, symmetry: str, mechanism=None) -> None:
    if symmetry not in SYMMETRIES:
        raise SymmetryError(f"unknown symmetry {symmetry!r}; expected one of {SYMMETRIES}")
    if symmetry == "none":
        return
    if mechanism is not None and not mechanism.anonymous:
        raise SymmetryError(f"mechanism {mechanism.name!r} is not declared anonymous")
    if symmetry == "anonymous_neutral":
        if mechanism is not None and not mechanism.neutral:
            raise SymmetryError(f"mechanism {mechanism.name!r} is not declared neutral")
        if not setting.uniform_capacity or setting.dummies:
            raise SymmetryError("neutrality reduction needs uniform capacities and no dummies")


def best_symmetry(setting: Setting, mechanism) -> str:
    """Strongest reduction the mechanism's declared capabilities allow."""
    if not mechanism.anonymous:
        return "none"
    if mechanism.neutral and setting.uniform_capacity and not setting.dummies:
        return "anonymous_neutral"
    return "anonymous"


def profiles(
    setting: Setting,
    symmetry: str = "none",
    mechanism=None,
    type_cap: int = DEFAULT_TYPE_CAP,
    profile_cap: int = DEFAULT_PROFILE_CAP,
) -> Iterator[ProfileClass]:
    """Deterministic iterator over profile classes.

    ``mechanism`` (optional) is checked for the capability the reduction needs.
    """
    check_symmetry(setting, symmetry, mechanism)
    types = all_types(setting, type_cap)
    n = setting.n
    total = len(types) ** n
    if total > profile_cap:
        raise CapExceeded(f"(m!)^n profiles for {setting}", total, profile_cap)
    return _iter(types, n, symmetry)


def _iter(types, n, symmetry):
    idx = 0
    if symmetry == "none":
        for combo in itertools.product(types, repeat=n):
            yield ProfileClass(combo, 1, idx, tuple(range(n)))
            idx += 1
    elif symmetry == "anonymous":
        for combo in itertools.combinations_with_replacement(range(len(types)), n):
            counts = Counter(combo)
            focal = tuple(combo.index(k) for k in sorted(counts))
            yield ProfileClass(
                tuple(types[k] for k in combo), _multinomial(counts.values()), idx, focal
            )
            idx += 1
    else:
        ref = types[0]
        for combo in itertools.combinations_with_replacement(range(len(types)), n - 1):
            counts = Counter(combo)
            mult = len(types) * _multinomial(counts.values())
            yield ProfileClass((ref,) + tuple(types[k] for k in combo), mult, idx, (0,))
            idx += 1


def partition(classes: Iterable[ProfileClass], k: int) -> list[Iterator[ProfileClass]]:
    """Split into k disjoint deterministic streams (round-robin by position).

    The source is materialized so that every stream can be consumed
    independently, e.g. from separate worker processes.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    items = list(classes)
    return [iter(items[p::k]) for p in range(k)]
