from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from partialsp.axioms import RowOracle, check_strategyproof, check_swap_monotonicity, check_upper_invariance
from partialsp.classify import MANIFEST
from partialsp.core import UtilityFn, make_profile, make_setting, named_setting, pref, unit_setting, utility_consistent
from partialsp.mechanisms import LIBRARY, get_mechanism
from partialsp.psp import (
    PreconditionError,
    certify,
    check_counterexample,
    compute_rho,
    delta_vector,
    horner_polys,
    manipulation_gain,
    maximality_counterexample,
    rho_bisect,
    sample_urbi,
    urbi_contains,
    urbi_share,
    verify_psp,
    violating_pair,
    witness_utility,
)

F = Fraction


def test_ps_example_delta_and_polynomials(s3):
    ps = get_mechanism("ps")
    t, rest = pref("abc"), [pref("bac"), pref("bca")]
    d = delta_vector(ps, s3, 0, t, pref("bac"), rest)
    assert d.values == (F(1, 4), F(-1, 3), F(1, 12))
    polys = horner_polys(d, t)
    assert [p.coeffs for p in polys] == [(F(1, 4),), (F(-1, 3), F(1, 4))]
    assert polys[1](F(4, 3)) == 0
    assert manipulation_gain(ps, s3, 0, t, pref("bac"), rest, [4, 3, 0]) == 0
    assert manipulation_gain(ps, s3, 0, t, pref("bac"), rest, [4, 3, 1]) < 0


def test_ps_rho_values(s3):
    ps = get_mechanism("ps")
    res = compute_rho(ps, s3)
    assert res.exact and res.value == F(3, 4) and res.binding is not None
    assert verify_psp(ps, s3, F(3, 4)) and not verify_psp(ps, s3, F(76, 100))
    assert certify(res, ps, s3)


def test_rsd_is_fully_partially_strategyproof(s3):
    rsd = get_mechanism("rsd")
    res = compute_rho(rsd, s3)
    assert res.value == 1 and res.binding is None
    assert rho_bisect(rsd, s3) == (1, 1)


def test_precondition_enforced(s4):
    with pytest.raises(PreconditionError) as exc:
        compute_rho(get_mechanism("nbm"), s4)
    assert not exc.value.report.holds


@pytest.mark.parametrize("name", LIBRARY)
def test_verify_at_one_is_strategyproofness(name, s3):
    f = get_mechanism(name)
    assert verify_psp(f, s3, 1).holds == check_strategyproof(f, s3).holds


@pytest.mark.parametrize("name", ["ps", "abm", "hybrid(rsd,ps,1/2)"])
def test_bounds_nest(name, s3):
    f = get_mechanism(name)
    orc = RowOracle(f, s3)
    grid = [F(k, 20) for k in range(1, 21)]
    verdicts = [verify_psp(f, s3, r, oracle=orc).holds for r in grid]
    # once it fails, it fails for every larger bound
    assert verdicts == sorted(verdicts, reverse=True)
    rho = compute_rho(f, s3, oracle=orc).value
    assert all(v == (r <= rho) for r, v in zip(grid, verdicts))


@pytest.mark.parametrize("name", LIBRARY)
def test_partial_strategyproofness_iff_swap_monotonic_and_upper_invariant(name):
    # a positive bound exists exactly when both axioms hold; 4x4 exhaustive probes run in the acceptance suite
    f = get_mechanism(name)
    for probe in MANIFEST[name]:
        if probe.setting == "4x4unit" and not probe.restricted:
            continue
        s = named_setting(probe.setting)
        kw = {"profiles": probe.profiles}
        both = check_swap_monotonicity(f, s, **kw).holds and check_upper_invariance(f, s, **kw).holds
        if both:
            assert compute_rho(f, s, check_precondition=False, **kw).value > 0
        else:
            assert not verify_psp(f, s, F(1, 10**6), **kw).holds


def test_failed_verification_carries_witness(s4):
    abm = get_mechanism("abm")
    res = verify_psp(abm, s4, F(17, 50))
    assert not res.holds and res.value < 0
    assert urbi_contains(res.utility, F(17, 50)) and utility_consistent(res.utility, res.witness.truthful)
    c = res.witness
    rest = [t for k, t in enumerate(c.profile) if k != c.agent]
    assert manipulation_gain(abm, s4, c.agent, c.truthful, c.misreport, rest, res.utility) == res.gain > 0


def test_witness_utility_shape():
    u = witness_utility(pref("abcd"), F(1, 2), 2, scale=100)
    assert [u[o] for o in "dcba"] == [0, 1, 200, 400]
    assert urbi_contains(u, F(1, 2))


def test_urbi_membership():
    assert urbi_contains([4, 2, 1], F(1, 3)) and not urbi_contains([4, 2, 1], F(1, 4))
    assert urbi_contains([4, 3, 0], F(3, 4))
    assert not urbi_contains([4, 3, 0], F(7, 10))
    assert urbi_contains([1, 1, 0], F(1, 10))


@given(st.permutations("abcd"), st.fractions(min_value=F(1, 100), max_value=1, max_denominator=100), st.integers(0, 2**32))
def test_sampled_utilities_lie_in_urbi(order, r, seed):
    t = pref(order)
    u = sample_urbi(t, r, seed)
    assert urbi_contains(u, r) and utility_consistent(u, t)
    assert u.min == 0 and max(u.values.values()) == 1


def test_share_errors_and_exactness():
    assert urbi_share(1, 1000, seed=1)[0] == 1.0
    with pytest.raises(ValueError):
        urbi_share(F(1, 2), 0)
    with pytest.raises(ValueError):
        sample_urbi(pref("abc"), 0)
    with pytest.raises(ValueError):
        verify_psp(get_mechanism("ps"), unit_setting(3), F(3, 2))


def test_counterexample_example_values(s3):
    u = UtilityFn.from_vector("abc", [2, 1, 0])
    assert violating_pair(u, F(1, 3)) == ("a", "b", F(1, 2))
    table = maximality_counterexample(s3, F(1, 3), u)
    row = table.allocate(s3, make_profile(s3, ["bac", "abc", "abc"])).row(0)
    third = F(1, 3)
    assert row == (third - F(1, 18), third + F(1, 6), third - F(1, 9))
    chk = check_counterexample(table, s3, F(1, 3), u)
    assert chk.ok and chk.gain == F(1, 18) and chk.verify.coverage == "full"


def test_counterexample_rejects_urbi_utility(s3):
    with pytest.raises(ValueError, match="no violating pair"):
        maximality_counterexample(s3, F(1, 3), [6, 2, 1])
    with pytest.raises(ValueError):
        maximality_counterexample(make_setting(2, "ab", 1), F(1, 3), [1, 0])


@pytest.mark.parametrize("seed", range(5))
def test_counterexample_random(seed):
    rng = np.random.default_rng(seed)
    s = unit_setting(4)
    r = F(int(rng.integers(1, 9)), 10)
    u = UtilityFn.from_vector(s.objects, [10, 10 * r + 1, 1, 0])
    chk = check_counterexample(maximality_counterexample(s, r, u, agent=seed % 4), s, r, u)
    assert chk.ok
