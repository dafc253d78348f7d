"""Exact arithmetic on finite sets of integers.

Reciprocal sums are kept as :class:`fractions.Fraction` so nothing is ever
rounded. Factorizations use a smallest-prime-factor table below a sieve limit
and Miller-Rabin / Pollard-Brent above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Literal

import numpy as np

ExactRational = Fraction
Mode = Literal["all", "maximal"]

MAX_VALUE = 2**63 - 1
SPF_LIMIT = 1 << 20


class OutOfRangeError(ValueError):
    pass


_spf_cache: dict[int, np.ndarray] = {}


def spf_table(limit: int = SPF_LIMIT) -> np.ndarray:
    """Smallest prime factor for every integer below ``limit`` (0 and 1 map to themselves)."""
    tab = _spf_cache.get(limit)
    if tab is not None:
        return tab
    spf = np.arange(limit, dtype=np.int64)
    for p in range(2, math.isqrt(limit - 1) + 1):
        if spf[p] == p:
            seg = spf[p * p :: p]
            mask = seg == np.arange(p * p, limit, p)
            seg[mask] = p
    spf.flags.writeable = False
    _spf_cache[limit] = spf
    return spf


def primes_upto(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


# Deterministic for n < 3.3e24, which covers the 64-bit input range.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    # fixed seeds keep factorization deterministic
    for c in range(1, 200):
        y, m, g, r, q = 2, 128, 1, 1, 1
        f = lambda v: (v * v + c) % n  # noqa: E731
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = f(y)
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = f(y)
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = f(ys)
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"Pollard-Brent failed on {n}")


def _factor_large(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if n < SPF_LIMIT:
        spf = spf_table()
        while n > 1:
            p = int(spf[n])
            out[p] = out.get(p, 0) + 1
            n //= p
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n)
    _factor_large(d, out)
    _factor_large(n // d, out)


@dataclass(frozen=True, order=True)
class FactoredInt:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod, last = 1, 1
        for p, a in self.factors:
            if p <= last or a < 1:
                raise ValueError(f"bad factorization {self.factors}")
            prod *= p**a
            last = p
        if prod != self.value or self.value < 2:
            raise ValueError(f"factors do not reconstruct {self.value}")

    @property
    def omega(self) -> int:
        """Number of distinct prime divisors."""
        return len(self.factors)

    @property
    def big_omega(self) -> int:
        """Number of prime factors counted with multiplicity."""
        return sum(a for _, a in self.factors)

    def __int__(self) -> int:
        return self.value


def factorize(n: int, max_value: int = MAX_VALUE) -> FactoredInt:
    n = int(n)
    if n < 2 or n > max_value:
        raise OutOfRangeError(f"factorize: {n} outside [2, {max_value}]")
    out: dict[int, int] = {}
    if n < SPF_LIMIT:
        _factor_large(n, out)
    else:
        m = n
        for p in (2, 3, 5, 7, 11, 13):
            while m % p == 0:
                out[p] = out.get(p, 0) + 1
                m //= p
        _factor_large(m, out)
    return FactoredInt(n, tuple(sorted(out.items())))


def prime_power_divisors(n: FactoredInt, mode: Mode = "all") -> set[int]:
    """Prime powers dividing ``n``.

    ``mode="all"`` gives every p^j with 1 <= j <= a; ``mode="maximal"`` only the
    exact powers p^a with p^a || n.
    """
    if mode == "maximal":
        return {p**a for p, a in n.factors}
    if mode == "all":
        return {p**j for p, a in n.factors for j in range(1, a + 1)}
    raise ValueError(f"unknown mode {mode!r}")


def is_smooth(n: FactoredInt, bound: int) -> bool:
    """True iff every maximal prime power p^a || n is <= bound."""
    if bound < 2:
        raise ValueError("bound must be >= 2")
    return all(p**a <= bound for p, a in n.factors)


def _as_factored(x) -> FactoredInt:
    return x if isinstance(x, FactoredInt) else factorize(x)


class IntSet:
    """Immutable finite set of integers >= 2 with cached set functionals."""

    def __init__(self, items: Iterable = ()):
        uniq: dict[int, FactoredInt] = {}
        for x in items:
            f = _as_factored(x)
            uniq[f.value] = f
        self.elements: tuple[FactoredInt, ...] = tuple(uniq[v] for v in sorted(uniq))
        self._values = tuple(f.value for f in self.elements)

    @property
    def values(self) -> tuple[int, ...]:
        return self._values

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self._values)

    def __contains__(self, n):
        return int(n) in self.value_set

    def __eq__(self, other):
        if isinstance(other, IntSet):
            return self._values == other._values
        return NotImplemented

    def __hash__(self):
        return hash(self._values)

    def __repr__(self):
        if len(self) > 12:
            head = ", ".join(map(str, self._values[:10]))
            return f"IntSet([{head}, ...] |{len(self)}|)"
        return f"IntSet({list(self._values)})"

    @cached_property
    def value_set(self) -> frozenset[int]:
        return frozenset(self._values)

    @cached_property
    def q_set(self) -> frozenset[int]:
        return self.prime_powers("all")

    def prime_powers(self, mode: Mode = "all") -> frozenset[int]:
        out: set[int] = set()
        for f in self.elements:
            out |= prime_power_divisors(f, mode)
        return frozenset(out)

    @cached_property
    def sigma(self) -> Fraction:
        return sigma_of(self)

    @cached_property
    def recip_sum(self) -> Fraction:
        return recip_sum(self)

    @cached_property
    def lcm(self) -> int:
        return lcm_set(self)

    def without(self, drop: Iterable[int]) -> "IntSet":
        drop = set(int(d) for d in drop)
        return IntSet(f for f in self.elements if f.value not in drop)

    def where(self, pred) -> "IntSet":
        return IntSet(f for f in self.elements if pred(f.value))

    def union(self, *others: "IntSet") -> "IntSet":
        elems = list(self.elements)
        for o in others:
            elems.extend(o.elements)
        return IntSet(elems)


def sigma_of(s: IntSet, mode: Mode = "all") -> Fraction:
    """Sum of 1/q over the prime powers q dividing some element of ``s``."""
    if len(s) == 0:
        raise ValueError("sigma_of: empty set")
    return sum((Fraction(1, q) for q in s.prime_powers(mode)), Fraction(0))


def recip_sum(s: Iterable) -> Fraction:
    vals = s.values if isinstance(s, IntSet) else [int(x) for x in s]
    if not vals:
        return Fraction(0)
    # one common denominator instead of repeated gcd reductions
    L = reduce(math.lcm, vals)
    return Fraction(sum(L // v for v in vals), L)


def lcm_set(s: IntSet, max_bits: int | None = None) -> int:
    if len(s) == 0:
        raise ValueError("lcm_set: empty set")
    L = reduce(math.lcm, s.values)
    if max_bits is not None and L.bit_length() > max_bits:
        raise OverflowError(f"lcm exceeds {max_bits} bits")
    return L


def sum_over_multiples(s: IntSet, q: int) -> Fraction:
    """Exact sum of 1/n over the elements n of ``s`` with q | n."""
    return recip_sum([v for v in s.values if v % q == 0])


def iterated_log(x: float, depth: int, floor: float = 1.0) -> float:
    """log applied ``depth`` times, each stage clamped below at ``floor``."""
    v = float(x)
    for _ in range(depth):
        v = max(math.log(v), floor) if v > 1 else floor
    return v
