"""Segmented sieving for prime-power-smooth integers in a range.

``enumerate_C`` returns the integers in [lo, hi] whose maximal prime powers
are all <= ``smooth_bound``; ``enumerate_Cprime`` further keeps the "normal"
ones, whose omega and Omega both lie near log log n.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .arithmetic import IntSet, factorize, primes_upto

SEGMENT_SIZE = 1 << 20
MAX_SEGMENTS = 64
DEFAULT_EPS = 0.5


class SieveBudgetError(ValueError):
    pass


@dataclass(frozen=True)
class SmoothQuery:
    lo: int
    hi: int
    smooth_bound: int
    normality_eps: Optional[float] = None

    def __post_init__(self):
        if not (2 <= self.lo <= self.hi):
            raise ValueError(f"need 2 <= lo <= hi, got [{self.lo}, {self.hi}]")
        if self.smooth_bound < 2:
            raise ValueError("smooth_bound must be >= 2")
        if self.normality_eps is not None and not (0 <= self.normality_eps):
            raise ValueError("normality_eps must be >= 0")


def _segments(lo: int, hi: int, size: int, max_segments: int):
    span = hi - lo + 1
    if span > size * max_segments:
        raise SieveBudgetError(
            f"range of {span} integers exceeds budget {max_segments} x {size}"
        )
    return [(a, min(a + size - 1, hi)) for a in range(lo, hi + 1, size)]


def _strip_primes(a: int, b: int, primes: np.ndarray, cap: Optional[int]):
    """Residual of each n in [a, b] after dividing out the given primes.

    When ``cap`` is set, also flags n divisible by some p^k > cap (the
    smallest such power), i.e. n having a maximal prime power above cap.
    """
    vals = np.arange(a, b + 1, dtype=np.int64)
    resid = vals.copy()
    bad = np.zeros(len(vals), dtype=bool)
    for p in primes.tolist():
        if p > b:
            break
        pk = p
        while pk <= b:
            start = (-a) % pk
            resid[start::pk] //= p
            if cap is not None and pk > cap:
                bad[start::pk] = True
                break
            pk *= p
    return vals, resid, bad


def _smooth_segment(a: int, b: int, primes: np.ndarray, bound: int) -> np.ndarray:
    vals, resid, bad = _strip_primes(a, b, primes, bound)
    return vals[(resid == 1) & ~bad]


def smooth_values(
    q: SmoothQuery,
    segment_size: int = SEGMENT_SIZE,
    max_segments: int = MAX_SEGMENTS,
    workers: int = 1,
) -> list[int]:
    """Sorted integers of [lo, hi] with all maximal prime powers <= bound."""
    segs = _segments(q.lo, q.hi, segment_size, max_segments)
    primes = primes_upto(min(q.smooth_bound, q.hi))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda s: _smooth_segment(*s, primes, q.smooth_bound), segs))
    else:
        parts = [_smooth_segment(a, b, primes, q.smooth_bound) for a, b in segs]
    return [int(v) for part in parts for v in part]


def enumerate_C(q: SmoothQuery, **kw) -> IntSet:
    return IntSet(factorize(v) for v in smooth_values(q, **kw))


def normal_reference(n: int) -> float:
    """log log n, clamped below at 1."""
    return max(math.log(math.log(n)), 1.0) if n > math.e else 1.0


def is_normal(f, eps: float) -> bool:
    ref = normal_reference(f.value)
    return abs(f.omega - ref) <= eps * ref and abs(f.big_omega - ref) <= eps * ref


def enumerate_Cprime(q: SmoothQuery, **kw) -> IntSet:
    eps = DEFAULT_EPS if q.normality_eps is None else q.normality_eps
    base = enumerate_C(q, **kw)
    return IntSet(f for f in base.elements if is_normal(f, eps))


def count_smooth(
    x: int,
    y_bound: int,
    segment_size: int = SEGMENT_SIZE,
    max_segments: int = MAX_SEGMENTS,
) -> int:
    """Number of n <= x whose prime divisors are all <= y_bound.

    n = 1 is counted (its prime condition is vacuous), as in the usual Psi(x, y).
    """
    if not (2 <= y_bound <= x):
        raise ValueError("need 2 <= y_bound <= x")
    primes = primes_upto(y_bound)
    total = 1
    for a, b in _segments(2, x, segment_size, max_segments):
        _, resid, _ = _strip_primes(a, b, primes, None)
        total += int(np.count_nonzero(resid == 1))
    return total
