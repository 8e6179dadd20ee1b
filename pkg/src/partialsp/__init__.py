"""Exact incentive analysis of random assignment mechanisms.

Swap monotonicity, upper and lower invariance, strategyproofness,
r-partial strategyproofness and the degree of strategyproofness, computed
with exact rational arithmetic over small settings.
"""
from .axioms import (
    AXIOMS,
    AxiomReport,
    Witness,
    check_all,
    check_lower_invariance,
    check_strategyproof,
    check_swap_monotonicity,
    check_upper_invariance,
    check_weak_sp,
    recheck,
)
from .core import (
    Allocation,
    Dominance,
    PrefOrder,
    Setting,
    UtilityFn,
    expected_utility,
    fosd_compare,
    make_profile,
    make_setting,
    named_setting,
    pref,
    unit_setting,
    utility_consistent,
)
from .enumeration import CapExceeded, class_count, profiles
from .mechanisms import (
    LIBRARY,
    Hybrid,
    Mechanism,
    TableMechanism,
    abm,
    constant,
    get_mechanism,
    hybrid,
    nbm,
    ps,
    rank_min,
    rank_min_detail,
    rsd,
)
from .psp import (
    PreconditionError,
    RhoResult,
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
)

__version__ = "0.1.0"
