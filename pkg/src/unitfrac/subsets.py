"""Subsets of a finite set whose reciprocals sum to exactly 1.

Two independent routes:

* combinatorial search (depth-first branch and bound, or meet in the middle)
  on integer weights L/n with L = lcm(D), target L;
* the exponential-sum identity
      #{S nonempty : sum_{n in S} 1/n in Z} = (1/P) sum_{h mod P} E(h) - 1,
      E(h) = prod_{n in D} (1 + e(h/n)),
  evaluated numerically over a full residue system h mod P.

The identity counts every nonempty subset with an *integer* reciprocal sum,
which is the unit-subset count whenever sum_{n in D} 1/n < 2.
"""

from __future__ import annotations

import math
import sys
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Literal, Optional

import numpy as np

from .arithmetic import IntSet, factorize, recip_sum

Method = Literal["branch_and_bound", "mitm", "exp_sum"]

MAX_SEARCH_SIZE = 512
NODE_BUDGET = 5_000_000
MITM_MAX_SIZE = 40
EXPSUM_MAX_POINTS = 10**6


class SearchBudgetError(ValueError):
    pass


@dataclass
class UnitSubsetResult:
    count: int
    witnesses: list[tuple[int, ...]]
    method: str
    exact: bool
    nodes: int = 0
    eliminated: tuple[int, ...] = ()

    def __post_init__(self):
        for w in self.witnesses:
            if recip_sum(w) != 1:
                raise AssertionError(f"witness {w} does not sum to 1")
        if self.count < len(self.witnesses):
            raise AssertionError("count below number of witnesses")

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "witnesses": [list(w) for w in self.witnesses],
            "method": self.method,
            "exact": self.exact,
        }


def _as_values(D) -> list[int]:
    vals = D.values if isinstance(D, IntSet) else sorted(set(int(x) for x in D))
    if any(v < 2 for v in vals):
        raise ValueError("elements must be >= 2")
    return list(vals)


def _subset_residues(weights: list[int], p: int) -> int:
    """Bitmask of residues mod p reachable as subset sums (empty sum included)."""
    full = (1 << p) - 1
    reach = 1
    for w in weights:
        s = w % p
        reach |= ((reach << s) | (reach >> (p - s))) & full
    return reach


def eliminate_unusable(values: list[int], work_limit: int = 10**7) -> tuple[list[int], list[int]]:
    """Drop elements that lie in no subset with reciprocal sum 1.

    For a prime p with p^k || lcm, the elements with p^k | n carry weights
    L/n prime to p, every other weight is divisible by p, and the target L
    is divisible by p; so the top-valuation elements used by any solution
    must have weights summing to 0 mod p. An element that cannot be
    completed that way is removed. Repeats until nothing changes.
    """
    vals = sorted(values)
    dropped: list[int] = []
    changed = True
    while changed and vals:
        changed = False
        L = reduce(math.lcm, vals)
        primes = sorted({p for v in vals for p in _prime_divisors(v)})
        for p in primes:
            k = _valuation(L, p)
            top = [v for v in vals if _valuation(v, p) == k]
            if len(top) ** 2 * p > work_limit:
                continue
            weights = [L // v for v in top]
            bad = []
            for i, v in enumerate(top):
                rest = _subset_residues(weights[:i] + weights[i + 1 :], p)
                need = (-weights[i]) % p
                if not (rest >> need) & 1:
                    bad.append(v)
            if bad:
                drop = set(bad)
                vals = [v for v in vals if v not in drop]
                dropped.extend(bad)
                changed = True
                break
    return vals, sorted(dropped)


def _valuation(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorize(n).factors]


def _bb_search(vals, cap, node_budget, stop_after):
    vals = sorted(vals)
    if not vals:
        return 0, [], True, 0
    L = reduce(math.lcm, vals)
    weights = [L // v for v in vals]
    n = len(vals)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + weights[i]

    count = 0
    nodes = 0
    witnesses: list[tuple[int, ...]] = []
    chosen: list[int] = []
    aborted = False

    def dfs(i: int, remaining: int) -> None:
        nonlocal count, nodes, aborted
        nodes += 1
        if nodes > node_budget or (stop_after is not None and count >= stop_after):
            aborted = True
            return
        if remaining == 0:
            count += 1
            if len(witnesses) < cap:
                witnesses.append(tuple(chosen))
            return
        if i == n or suffix[i] < remaining:
            return
        w = weights[i]
        if w <= remaining:
            chosen.append(vals[i])
            dfs(i + 1, remaining - w)
            chosen.pop()
            if aborted:
                return
        dfs(i + 1, remaining)

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * n + 100))
    try:
        dfs(0, L)
    finally:
        sys.setrecursionlimit(old)
    return count, witnesses, not aborted, nodes


def _subset_sums(weights: list[int]) -> list[int]:
    sums = [0]
    for w in weights:
        sums += [s + w for s in sums]
    return sums


def _mitm_search(vals, cap):
    vals = sorted(vals)
    if not vals:
        return 0, []
    L = reduce(math.lcm, vals)
    weights = [L // v for v in vals]
    half = len(vals) // 2
    left, right = weights[:half], weights[half:]
    lsums = _subset_sums(left)
    index = defaultdict(list)
    for mask, s in enumerate(lsums):
        if s <= L:
            index[s].append(mask)
    count = 0
    pairs = []
    for rmask, s in enumerate(_subset_sums(right)):
        hits = index.get(L - s)
        if hits:
            count += len(hits)
            pairs.extend((lm, rmask) for lm in hits)
    witnesses = []
    for lm, rm in pairs:
        sel = [vals[i] for i in range(half) if lm >> i & 1]
        sel += [vals[half + i] for i in range(len(right)) if rm >> i & 1]
        witnesses.append(tuple(sel))
    witnesses.sort()
    return count, witnesses[:cap]


def find_unit_subsets(
    D,
    cap: int = 100,
    method: str = "branch_and_bound",
    node_budget: int = NODE_BUDGET,
    stop_after: Optional[int] = None,
    reduce_first: bool = True,
    max_size: int = MAX_SEARCH_SIZE,
) -> UnitSubsetResult:
    """Count (and list up to ``cap``) the subsets S of D with sum 1/n = 1.

    Witnesses come back in lexicographic order of their sorted elements.
    ``exact`` is False when the node budget ran out or ``stop_after`` cut the
    search short; ``count`` is then a lower bound.
    """
    vals = _as_values(D)
    if len(vals) > max_size:
        raise SearchBudgetError(f"|D| = {len(vals)} exceeds search budget {max_size}")
    dropped: list[int] = []
    if reduce_first:
        vals, dropped = eliminate_unusable(vals)

    if method in ("bb", "branch_and_bound"):
        count, wit, exact, nodes = _bb_search(vals, cap, node_budget, stop_after)
        res = UnitSubsetResult(count, sorted(wit), "branch_and_bound", exact, nodes, tuple(dropped))
    elif method == "mitm":
        if len(vals) > MITM_MAX_SIZE:
            raise SearchBudgetError(f"meet-in-the-middle limited to {MITM_MAX_SIZE} elements")
        count, wit = _mitm_search(vals, cap)
        res = UnitSubsetResult(count, wit, "mitm", True, 0, tuple(dropped))
    elif method in ("exp_sum", "expsum"):
        full = _as_values(D)
        if recip_sum(full) >= 2:
            raise ValueError("exp_sum counts integer-sum subsets; needs reciprocal sum < 2")
        ev = exp_sum_count(full)
        res = UnitSubsetResult(ev.rounded_count, [], "exp_sum", ev.exact)
    else:
        raise ValueError(f"unknown method {method!r}")
    return res


def exhaustive_unit_subsets(D) -> list[tuple[int, ...]]:
    """Every subset checked by exact rational summation. Only for small D."""
    vals = _as_values(D)
    if len(vals) > 24:
        raise SearchBudgetError("exhaustive enumeration limited to 24 elements")
    out = []
    for mask in range(1, 1 << len(vals)):
        sel = tuple(v for i, v in enumerate(vals) if mask >> i & 1)
        if sum(Fraction(1, v) for v in sel) == 1:
            out.append(sel)
    return sorted(out)


# -- exponential sums ----------------------------------------------------


@dataclass
class EValue:
    value: complex
    cosine_form: complex

    @property
    def modulus(self) -> float:
        return abs(self.cosine_form)


def eval_E(D, h: float) -> EValue:
    """E(h) = prod (1 + e(h/n)) directly, and via 2^|D| e(h s / 2) prod cos(pi h / n).

    s is the (full) reciprocal sum of D.
    """
    vals = _as_values(D)
    h = float(h)
    direct = complex(1.0)
    cos_prod = 1.0
    for n in vals:
        direct *= 1.0 + np.exp(2j * np.pi * h / n)
        cos_prod *= math.cos(math.pi * h / n)
    s = recip_sum(vals)
    # reduce h*s mod 2 exactly when h is an integer, to keep the phase accurate
    if h == int(h):
        hs = Fraction(int(h)) * s % 2
        phase = np.exp(1j * np.pi * float(hs))
    else:
        phase = np.exp(1j * np.pi * h * float(s))
    return EValue(complex(direct), complex(phase * (2.0 ** len(vals)) * cos_prod))


@dataclass
class ExpSumEvaluation:
    P: int
    h: np.ndarray = field(repr=False)
    samples: np.ndarray = field(repr=False)
    total: float
    rounded_count: int
    rounding_gap: float
    imag_residual: float

    @property
    def exact(self) -> bool:
        return self.rounding_gap < 0.25

    def sample(self, h: int) -> complex:
        i = int(h) - int(self.h[0])
        return complex(self.samples[i])


def exp_sum_count(D, max_points: int = EXPSUM_MAX_POINTS) -> ExpSumEvaluation:
    """Number of nonempty S subset of D with integer reciprocal sum, via the h-sum."""
    vals = _as_values(D)
    if not vals:
        return ExpSumEvaluation(1, np.zeros(1, int), np.ones(1, complex), 0.0, 0, 0.0, 0.0)
    P = reduce(math.lcm, vals)
    if P > max_points:
        raise SearchBudgetError(f"lcm {P} exceeds the {max_points}-point budget")
    h = np.arange(-((P - 1) // 2), P // 2 + 1, dtype=np.int64)
    E = np.ones(P, dtype=complex)
    for n in vals:
        # h mod n keeps the argument of the root of unity small and exact
        E *= 1.0 + np.exp(2j * np.pi * (h % n) / n)
    # compensated (exactly rounded) summation across h
    total = math.fsum(E.real.tolist()) / P - 1.0
    imag = math.fsum(E.imag.tolist()) / P
    rounded = int(round(total))
    return ExpSumEvaluation(P, h, E, total, rounded, abs(total - rounded), abs(imag))


@dataclass
class PositivityReport:
    N: int
    precondition_ok: bool
    detail: str
    h_checked: int = 0
    first_violation: Optional[int] = None
    min_normalized_real: Optional[float] = None  # min over h of Re E(h) / 2^|D|

    @property
    def passed(self) -> bool:
        return self.precondition_ok and self.first_violation is None


def check_small_h_positivity(D, N: int) -> PositivityReport:
    """Check E(h) + E(-h) > 0 for every integer 0 < h < N/6.

    Requires sum 1/n in [2 - 3/N, 2); otherwise the report says so.
    Values are tracked as E(h) / 2^|D| so large sets do not overflow.
    """
    vals = _as_values(D)
    s = recip_sum(vals)
    lo = 2 - Fraction(3, N)
    if not (lo <= s < 2):
        return PositivityReport(N, False, f"reciprocal sum {s} outside [{lo}, 2)")
    hs = [h for h in range(1, N) if 6 * h < N]
    first, worst = None, None
    for h in hs:
        if any(2 * h % n == 0 and h % n for n in vals):
            z = complex(0.0)  # a factor 1 + e(1/2) vanishes exactly
        else:
            z = complex(1.0)
            for n in vals:
                z *= (1.0 + np.exp(2j * np.pi * (h % n) / n)) / 2.0
        # E(h) + E(-h) = 2 Re E(h)
        if worst is None or z.real < worst:
            worst = z.real
        if z.real <= 0 and first is None:
            first = h
    return PositivityReport(N, True, "ok" if first is None else f"violation at h={first}", len(hs), first, worst)
