from fractions import Fraction

import pytest

from oracles import brute_axioms
from partialsp.axioms import (
    AXIOMS,
    check_all,
    check_lower_invariance,
    check_strategyproof,
    check_swap_monotonicity,
    check_weak_sp,
    recheck,
)
from partialsp.core import make_setting, pref, unit_setting
from partialsp.mechanisms import LIBRARY, get_mechanism
from partialsp.serialize import load_table, read_json

F = Fraction
EX4 = ("abcd", "acbd", "bcad", "bcad")


def test_nbm_example_witness_rechecks():
    s = unit_setting(4)
    nbm = get_mechanism("nbm")
    only = [(EX4, (0,), ("acbd",))]
    sm = check_swap_monotonicity(nbm, s, profiles=only)
    li = check_lower_invariance(nbm, s, profiles=only)
    assert not sm.holds and not li.holds
    assert sm.witness.objects == ("b", "c") and li.witness.objects == ("d",)
    assert sm.witness.delta == (0, 0, F(-1, 4), F(1, 4))
    assert recheck(sm, nbm, s) and recheck(li, nbm, s)
    assert sm.coverage == "partial" and sm.symmetry == "restricted"


def test_nbm_exhaustive_failure_rechecks():
    s = unit_setting(4)
    nbm = get_mechanism("nbm")
    rep = check_swap_monotonicity(nbm, s)
    assert not rep.holds and recheck(rep, nbm, s)


@pytest.mark.parametrize("name", LIBRARY)
@pytest.mark.parametrize("setting", [unit_setting(3), make_setting(3, "abc", [2, 1, 1]), make_setting(2, "abc", 1)])
def test_reduced_scan_matches_brute_force(name, setting):
    f = get_mechanism(name)
    want = brute_axioms(f, setting)
    got = check_all(f, setting)
    assert {a: r.holds for a, r in got.items()} == want
    for rep in got.values():
        assert rep.coverage == "full"
        if not rep.holds:
            assert recheck(rep, f, setting)


@pytest.mark.parametrize("symmetry", ["none", "anonymous", "anonymous_neutral"])
def test_symmetry_modes_agree(symmetry):
    s = unit_setting(3)
    for name in ("ps", "abm", "rsd"):
        f = get_mechanism(name)
        base = check_all(f, s, symmetry="none")
        red = check_all(f, s, symmetry=symmetry)
        assert {a: r.holds for a, r in base.items()} == {a: r.holds for a, r in red.items()}


def test_workers_do_not_change_reports():
    s = unit_setting(3)
    f = get_mechanism("ps")
    one = check_all(f, s, workers=1)
    two = check_all(f, s, workers=2)
    for a in AXIOMS:
        assert one[a].to_dict(s) == two[a].to_dict(s)


def test_local_and_global_strategyproofness():
    s = unit_setting(3)
    for name in ("rsd", "ps"):
        f = get_mechanism(name)
        assert check_strategyproof(f, s).holds == check_strategyproof(f, s, "local").holds
    with pytest.raises(ValueError):
        check_strategyproof(get_mechanism("rsd"), s, "sideways")


def test_partial_table_skips_missing_rows(ivan_path):
    table = load_table(read_json(ivan_path))
    rep = check_weak_sp(table, table.setting)
    assert rep.holds and rep.coverage == "partial"
    assert rep.constraints == 6 and rep.skipped == 9
    sp = check_strategyproof(table, table.setting)
    assert not sp.holds and sp.witness.misreport in (pref("acb"), pref("bac"))
