"""End-to-end acceptance checks, one test per criterion.

Each test prints a PASS/FAIL line in the "acceptance criteria" section of the
pytest summary. Tolerances and runtime budgets are the stated ones.
"""

import math
import random
import time
from fractions import Fraction

from unitfrac.arithmetic import IntSet
from unitfrac.dickman import build_rho, rho_at, verify_section2
from unitfrac.extraction import (
    DensityParams,
    ExtractionError,
    lemma4_violations,
    lemma4_extract,
    prop2_extract,
    prop2_violations,
)
from unitfrac.harness import InfeasibleColoring, check_coloring, greedy_limit, make_coloring
from unitfrac.sieve import SmoothQuery, count_smooth, enumerate_C
from unitfrac.subsets import exp_sum_count, find_unit_subsets

from oracles import smooth_by_trial, unit_subsets_brute
from synth import lemma4_case, prop2_case

DIVISORS_2520 = [d for d in range(2, 2521) if 2520 % d == 0]
DIVISORS_720 = [d for d in range(2, 721) if 720 % d == 0]


def test_criterion_1_rho_closed_form(criterion):
    with criterion(1, "rho(2) = 1 - ln 2 within 1e-6; rho = 1 on [0, 1]", 1.0) as notes:
        t = build_rho(2.0)
        err = abs(rho_at(t, 2.0) - (1 - math.log(2)))
        notes.append(f"|err| = {err:.2e}")
        assert err < 1e-6
        for u in (0.0, 0.25, 0.5, 0.999, 1.0):
            assert rho_at(t, u) == 1.0


def test_criterion_2_density_constant(criterion, rho_table):
    with criterion(2, "smooth reciprocal-sum estimate > 6.0001 and exponent rounding", 5.0) as notes:
        rep = verify_section2(rho_table, u=4.32, delta=0.25 - 1 / 4.32 - 0.0001, log_n_per_r=163550.0)
        est, rounds, below = rep.checks
        notes.append(f"estimate {est.value:.7f} vs 6.0001, {est.detail}")
        notes.append(f"163550(1+delta) = {rounds.value:.4f}")
        assert rounds.passed and round(rounds.value) == 166562
        assert below.passed and 166562 < 167000
        assert est.value > 6.0001, f"estimate {est.value:.7f} <= 6.0001 ({est.detail})"


def test_criterion_3_exp_sum_vs_exhaustive(criterion):
    with criterion(3, "exp-sum count equals exhaustive count on 100 sets", 30.0) as notes:
        rng = random.Random(2520)
        worst = 0.0
        for _ in range(100):
            # reciprocal sum < 2 so integer-sum subsets are exactly the unit subsets
            while True:
                D = rng.sample(DIVISORS_2520, rng.randint(1, 14))
                if sum(Fraction(1, d) for d in D) < 2:
                    break
            assert math.lcm(*D) <= 2520
            ev = exp_sum_count(D)
            worst = max(worst, ev.rounding_gap)
            assert ev.rounding_gap < 0.25
            assert ev.rounded_count == len(unit_subsets_brute(D)), D
        notes.append(f"max rounding gap {worst:.2e}")


def test_criterion_4_branch_and_bound_vs_exhaustive(criterion):
    with criterion(4, "branch-and-bound equals exhaustive for |D| <= 16", 60.0) as notes:
        rng = random.Random(16)
        total = 0
        pools = [DIVISORS_2520, DIVISORS_720, list(range(2, 121))]
        for i in range(120):
            pool = pools[i % 3]
            D = rng.sample(pool, rng.randint(1, 16) if i % 4 == 0 else 16)
            expected = unit_subsets_brute(D)
            res = find_unit_subsets(D, cap=10**6)
            assert res.exact
            assert res.count == len(expected) and res.witnesses == expected, D
            for w in res.witnesses:
                assert sum(Fraction(1, v) for v in w) == 1
            total += res.count
        notes.append(f"120 sets, {total} unit subsets")


def test_criterion_5_extraction_invariants(criterion):
    with criterion(5, "extraction outputs pass exact re-scan (200 + 200 runs)", 60.0) as notes:
        ok4 = ok2 = 0
        for seed in range(200):
            S, rho, mu, p = lemma4_case(seed)
            assert 50 <= p.N <= 5000
            try:
                T = lemma4_extract(S, rho, mu, p)
            except ExtractionError:
                pass
            else:
                ok4 += 1
                assert set(T) <= set(S)
                assert sum(Fraction(1, n) for n in T) > mu
                assert lemma4_violations(T, rho, mu, p) == []

            J, p = prop2_case(seed)
            try:
                E = prop2_extract(J, p)
            except ExtractionError:
                continue
            ok2 += 1
            alpha = J.recip_sum
            s = sum(Fraction(1, n) for n in E)
            assert set(E) <= set(J)
            assert p.nu - Fraction(1, p.N) <= s < p.nu
            assert prop2_violations(E, p, alpha) == []
            # every element is >= N, so each removal step costs at most 1/N
            assert min(J) >= p.N
        notes.append(f"successful runs: thinning {ok4}/200, window {ok2}/200")
        assert ok4 > 0 and ok2 > 0


def test_criterion_6_single_class_threshold(criterion):
    with criterion(6, "r = 1: least M is 6 with witness {2,3,6}; M = 5 false", 1.0) as notes:
        verdicts = {}
        for M in range(2, 7):
            rep = check_coloring(make_coloring(M, 1, "round_robin"))
            assert rep.exact
            verdicts[M] = rep
        assert not any(verdicts[M].verdict for M in range(2, 6))
        assert verdicts[6].verdict
        assert verdicts[6].classes[0].witness == [2, 3, 6]
        notes.append("M = 6")


def test_criterion_7_greedy_lower_bound(criterion):
    with criterion(7, "greedy colorings always give verdict false, r in 1..5", 60.0) as notes:
        runs = 0
        for r in range(1, 6):
            limit = greedy_limit(r)
            for M in range(2, limit + 1):
                c = make_coloring(M, r, "greedy_adversarial")
                rep = check_coloring(c)
                assert rep.verdict is False and rep.exact, (r, M)
                assert all(cl.recip_sum < 1 for cl in rep.classes)
                runs += 1
            try:
                make_coloring(limit + 1, r, "greedy_adversarial")
            except InfeasibleColoring:
                pass
            else:
                raise AssertionError(f"greedy should stall at M = {limit + 1} for r = {r}")
        notes.append(f"{runs} colorings, limits {[greedy_limit(r) for r in range(1, 6)]}")


def test_criterion_8_sieve_oracle_and_density(criterion, rho_table):
    with criterion(8, "sieve equals trial division on 50 queries; Psi(1e6, 1e3) within 15% of rho(2)", 120.0) as notes:
        rng = random.Random(100_000)
        for _ in range(50):
            lo = rng.randint(2, 10**5)
            hi = rng.randint(lo, min(10**5, lo + rng.choice([100, 5_000, 50_000])))
            bound = rng.choice([2, 10, 100, 1000, 10**4, 10**5])
            assert list(enumerate_C(SmoothQuery(lo, hi, bound))) == smooth_by_trial(lo, hi, bound)
        ratio = count_smooth(10**6, 10**3) / 10**6
        rel = abs(ratio / rho_at(rho_table, 2.0) - 1)
        notes.append(f"Psi/x = {ratio:.5f}, relative deviation {rel:.1%}")
        assert rel < 0.15
