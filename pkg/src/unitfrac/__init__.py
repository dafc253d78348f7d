"""Exact tools for unit-fraction colorings: smooth sets, Dickman rho,
unit-subset counting, extraction chains and coloring experiments."""

from .arithmetic import (
    ExactRational,
    FactoredInt,
    IntSet,
    factorize,
    is_smooth,
    lcm_set,
    prime_power_divisors,
    recip_sum,
    sigma_of,
)
from .dickman import RhoTable, build_rho, recip_sum_estimate, rho_at, verify_section2
from .extraction import (
    DensityParams,
    Interval,
    Prop3Outcome,
    find_qd,
    lemma4_extract,
    non_divisors,
    prop1_construct,
    prop2_extract,
    prop3_classify,
)
from .harness import Coloring, ExperimentReport, check_coloring, make_coloring, sweep_threshold
from .sieve import SmoothQuery, count_smooth, enumerate_C, enumerate_Cprime
from .subsets import (
    UnitSubsetResult,
    ExpSumEvaluation,
    check_small_h_positivity,
    eval_E,
    exp_sum_count,
    find_unit_subsets,
)

__version__ = "0.1.0"
