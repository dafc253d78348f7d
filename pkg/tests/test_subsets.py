import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from unitfrac.arithmetic import IntSet
from unitfrac.subsets import (
    SearchBudgetError,
    UnitSubsetResult,
    check_small_h_positivity,
    eliminate_unusable,
    eval_E,
    exhaustive_unit_subsets,
    exp_sum_count,
    find_unit_subsets,
)

from oracles import integer_sum_subsets_brute, unit_subsets_brute

DIVISORS_2520 = [d for d in range(2, 2521) if 2520 % d == 0]


@pytest.mark.parametrize(
    "D, count, witnesses",
    [
        ([2, 3, 6], 1, [(2, 3, 6)]),
        ([2, 3, 4, 6, 12], 2, [(2, 3, 6), (2, 4, 6, 12)]),
        ([3, 4, 5], 0, []),
        ([], 0, []),
    ],
)
@pytest.mark.parametrize("method", ["branch_and_bound", "mitm"])
def test_find_examples(D, count, witnesses, method):
    res = find_unit_subsets(D, method=method)
    assert res.count == count
    assert res.witnesses == witnesses
    assert res.exact


def test_find_rejects_small_elements():
    with pytest.raises(ValueError):
        find_unit_subsets([1, 2])


def test_find_size_budget():
    with pytest.raises(SearchBudgetError):
        find_unit_subsets(range(2, 20), max_size=10)
    with pytest.raises(SearchBudgetError):
        find_unit_subsets(range(2, 60), method="mitm", reduce_first=False)


def test_node_budget_makes_result_inexact():
    res = find_unit_subsets(range(2, 40), node_budget=1000, reduce_first=False)
    assert not res.exact


def test_stop_after():
    res = find_unit_subsets(DIVISORS_2520[:12], stop_after=1)
    assert res.count == 1 and len(res.witnesses) == 1
    assert sum(Fraction(1, v) for v in res.witnesses[0]) == 1


def test_cap_limits_witness_list_not_count():
    D = [2, 3, 4, 6, 12]
    res = find_unit_subsets(D, cap=1)
    assert res.count == 2 and res.witnesses == [(2, 3, 6)]


def test_result_rejects_bad_witness():
    with pytest.raises(AssertionError):
        UnitSubsetResult(1, [(2, 3)], "x", True)


def test_elimination_keeps_every_solution():
    rng = random.Random(1)
    for _ in range(60):
        D = rng.sample(range(2, 80), rng.randint(3, 14))
        kept, dropped = eliminate_unusable(D)
        assert sorted(kept + dropped) == sorted(D)
        for sol in unit_subsets_brute(D):
            assert not set(sol) & set(dropped)


def test_elimination_drops_lonely_prime():
    kept, dropped = eliminate_unusable([2, 3, 6, 7])
    assert dropped == [7] and kept == [2, 3, 6]


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from(DIVISORS_2520), min_size=0, max_size=14, unique=True))
def test_methods_agree_with_brute_force(D):
    expected = unit_subsets_brute(D)
    for method in ("branch_and_bound", "mitm"):
        for reduce_first in (True, False):
            res = find_unit_subsets(D, method=method, cap=10**6, reduce_first=reduce_first)
            assert res.count == len(expected)
            assert res.witnesses == expected
    assert exhaustive_unit_subsets(D) == expected


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(DIVISORS_2520), min_size=1, max_size=12, unique=True))
def test_exp_sum_counts_integer_sum_subsets(D):
    ev = exp_sum_count(D)
    assert ev.exact
    assert ev.rounded_count == integer_sum_subsets_brute(D)
    assert ev.imag_residual < 1e-6
    if sum(Fraction(1, d) for d in D) < 2:
        assert ev.rounded_count == len(unit_subsets_brute(D))
        assert find_unit_subsets(D, method="exp_sum").count == ev.rounded_count


def test_exp_sum_method_refuses_heavy_sets():
    with pytest.raises(ValueError):
        find_unit_subsets(list(range(2, 12)), method="exp_sum")


def test_exp_sum_point_budget():
    with pytest.raises(SearchBudgetError):
        exp_sum_count([7, 11, 13, 17], max_points=1000)


def test_exp_sum_samples_match_eval_E():
    D = [2, 3, 4, 5, 12]
    ev = exp_sum_count(D)
    for h in (-7, 0, 5, 29):
        e = eval_E(D, h)
        assert ev.sample(h) == pytest.approx(e.value, abs=1e-9)


@given(st.lists(st.integers(2, 200), min_size=1, max_size=10, unique=True), st.floats(-500, 500))
def test_product_and_cosine_forms_agree(D, h):
    e = eval_E(D, h)
    assert e.value == pytest.approx(e.cosine_form, abs=1e-7 * 2 ** len(D))
    assert abs(e.value) == pytest.approx(e.modulus, abs=1e-7 * 2 ** len(D))


def test_eval_E_at_zero():
    e = eval_E([2, 3, 7], 0)
    assert e.value == pytest.approx(8)


def test_positivity_precondition_reported():
    rep = check_small_h_positivity([2, 3], 60)
    assert not rep.precondition_ok and not rep.passed


def _positivity_brute(D, N):
    first = None
    for h in range(1, N):
        if 6 * h >= N:
            break
        if any(Fraction(h, n).denominator == 2 for n in D):
            re = 0.0
        else:
            z = 1
            for n in D:
                z *= (1 + cmath.exp(2j * cmath.pi * h / n)) / 2
            re = z.real
        if re <= 0 and first is None:
            first = h
    return first


def _near_two(D):
    s = sum(Fraction(1, d) for d in D)
    assert s < 2
    return math.floor(3 / (2 - s))


def test_positivity_exact_zero_factor():
    D = list(range(2, 11))  # reciprocal sum 1.929; n = 2 kills E(1)
    N = _near_two(D)
    rep = check_small_h_positivity(D, N)
    assert rep.precondition_ok
    assert rep.h_checked == len([h for h in range(1, N) if 6 * h < N])
    assert rep.first_violation == 1 == _positivity_brute(D, N)


def test_positivity_odd_set_matches_brute_force():
    D, s = [], Fraction(0)
    k = 3
    while s + Fraction(1, k) < 2:
        D.append(k)
        s += Fraction(1, k)
        k += 2
    N = _near_two(D)
    rep = check_small_h_positivity(D, N)
    assert rep.precondition_ok
    assert rep.first_violation == _positivity_brute(D, N)
