import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import kendall_tau
from partialsp.core import (
    Allocation,
    Dominance,
    InvalidAllocation,
    InvalidPreference,
    InvalidSetting,
    PrefOrder,
    UtilityFn,
    canonical_transition,
    contour_sets,
    expected_utility,
    fosd_compare,
    make_profile,
    make_setting,
    named_setting,
    neighborhood,
    pref,
    unit_setting,
    utility_consistent,
)

F = Fraction

orders = st.permutations(list("abcde")).map(lambda p: PrefOrder(tuple(p)))


def test_pref_parse_forms():
    assert pref("a>b>c") == pref("abc") == pref(["a", "b", "c"]) == pref("a ≻ b ≻ c")
    assert str(pref("abc")) == "a>b>c"
    with pytest.raises(InvalidPreference):
        pref("aab")


def test_choice_rank_swap():
    t = pref("abcd")
    assert t.ch(1) == "a" and t.ch(4) == "d"
    assert t.rank("c") == 3
    assert t.swap(2) == pref("acbd")
    assert t.prefers("a", "d") and not t.prefers("d", "a")
    with pytest.raises(IndexError):
        t.ch(0)


@given(orders)
def test_neighborhood_is_kendall_distance_one(t):
    near = neighborhood(t)
    assert len(near) == len(t) - 1
    every = [PrefOrder(p) for p in itertools.permutations(t.ranking)]
    assert set(near) == {s for s in every if kendall_tau(t, s) == 1}


@given(orders, orders)
def test_canonical_transition_walks_adjacent_swaps(t1, t2):
    path = canonical_transition(t1, t2)
    assert path[0] == t1 and path[-1] == t2
    assert all(kendall_tau(a, b) == 1 for a, b in zip(path, path[1:]))
    assert len(path) - 1 == kendall_tau(t1, t2)


def test_contour_sets():
    upper, lower = contour_sets(pref("abcd"), "b")
    assert upper == {"a"} and lower == {"c", "d"}


def test_setting_validation():
    with pytest.raises(InvalidSetting):
        make_setting(0, "abc")
    with pytest.raises(InvalidSetting):
        make_setting(2, "ab", [1, 0])
    with pytest.raises(InvalidSetting):
        make_setting(2, "ab", [1, 1, 1])
    with pytest.raises(InvalidSetting):
        named_setting("three")


def test_dummy_fills_shortfall():
    s = make_setting(3, "ab", 1)
    assert s.dummies == ("_dummy",) and s.q == (1, 1, 1)
    assert s.real_objects == ("a", "b")
    prof = make_profile(s, ["ab", "ba", "ab"])
    assert all(t.ranking[-1] == "_dummy" for t in prof)


def test_profile_validation():
    s = unit_setting(3)
    with pytest.raises(InvalidPreference):
        make_profile(s, ["abc", "abd", "abc"])
    with pytest.raises(InvalidPreference):
        make_profile(s, ["abc", "abc"])


def test_allocation_validation():
    s = unit_setting(2)
    Allocation([[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]]).validate(s)
    with pytest.raises(InvalidAllocation, match="row 0"):
        Allocation([[F(1, 2), F(1, 3)], [F(1, 2), F(1, 2)]]).validate(s)
    with pytest.raises(InvalidAllocation, match="column a"):
        Allocation([[1, 0], [1, 0]]).validate(s)
    with pytest.raises(InvalidAllocation, match="outside"):
        Allocation([[F(3, 2), F(-1, 2)], [0, 1]]).validate(s)


def test_fosd_cases():
    t = pref("abc")
    objs = ("a", "b", "c")
    assert fosd_compare((F(1, 2), F(1, 2), 0), (F(1, 3),) * 3, t, objs) is Dominance.DOMINATES_STRICTLY
    assert fosd_compare((F(1, 3),) * 3, (F(1, 2), F(1, 2), 0), t, objs) is Dominance.DOMINATED
    assert fosd_compare((1, 0, 0), (1, 0, 0), t, objs) is Dominance.EQUAL
    assert fosd_compare((F(1, 2), 0, F(1, 2)), (0, 1, 0), t, objs) is Dominance.INCOMPARABLE
    assert Dominance.EQUAL.weakly_dominates and not Dominance.INCOMPARABLE.weakly_dominates


rows3 = st.lists(st.integers(0, 12), min_size=3, max_size=3).filter(sum).map(
    lambda v: tuple(F(x, sum(v)) for x in v)
)
utils3 = st.lists(st.integers(0, 50), min_size=3, max_size=3, unique=True)


@given(rows3, rows3, utils3)
def test_fosd_agrees_with_expected_utility(x, y, vals):
    # weak FOSD dominance for t implies weakly higher expected utility for every u consistent with t
    u = UtilityFn.from_vector("abc", vals)
    t = u.order()
    if fosd_compare(x, y, t, "abc").weakly_dominates:
        assert expected_utility(u, x, "abc") >= expected_utility(u, y, "abc")


def test_utility_helpers():
    u = UtilityFn({"a": 4, "b": 3, "c": 0})
    assert u.order() == pref("abc")
    assert utility_consistent(u, pref("abc")) and not utility_consistent(u, pref("bac"))
    assert expected_utility(u, {"a": F(3, 4), "c": F(1, 4)}) == 3
    with pytest.raises(InvalidPreference):
        UtilityFn({"a": 1, "b": 1}).order()
