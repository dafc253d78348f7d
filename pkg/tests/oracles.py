"""Deliberately naive reference implementations used as test oracles.

None of these import the code under test.
"""

import itertools
import math
from fractions import Fraction


def trial_factor(n):
    out = []
    d = 2
    while d * d <= n:
        a = 0
        while n % d == 0:
            n //= d
            a += 1
        if a:
            out.append((d, a))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def smooth_by_trial(lo, hi, bound):
    return [n for n in range(lo, hi + 1) if all(p**a <= bound for p, a in trial_factor(n))]


def psi_by_trial(x, y):
    return sum(1 for n in range(1, x + 1) if all(p <= y for p, _ in trial_factor(n)))


def unit_subsets_brute(vals):
    """Every subset, summed exactly as integers over the common denominator."""
    vals = sorted(vals)
    if not vals:
        return []
    L = math.lcm(*vals)
    w = {v: L // v for v in vals}
    out = []
    for k in range(1, len(vals) + 1):
        for c in itertools.combinations(vals, k):
            if sum(w[v] for v in c) == L:
                out.append(c)
    return sorted(out)


def integer_sum_subsets_brute(vals):
    vals = sorted(vals)
    n = 0
    for k in range(1, len(vals) + 1):
        for c in itertools.combinations(vals, k):
            if sum(Fraction(1, v) for v in c).denominator == 1:
                n += 1
    return n


def prime_powers(n):
    return {p**j for p, a in trial_factor(n) for j in range(1, a + 1)}


def lemma4_chain(S, rho, mu, L):
    """Straight transcription of the greedy chain with full recomputation."""
    cur = sorted(S)
    steps = []
    while True:
        qs = sorted(set().union(*(prime_powers(n) for n in cur))) if cur else []
        hit = None
        for q in qs:
            s = sum(Fraction(1, n) for n in cur if n % q == 0)
            if s < (rho - mu) / (2 * q * L):
                hit = q
                break
        if hit is None:
            return cur, steps
        steps.append(hit)
        cur = [n for n in cur if n % hit]


def prop2_chain(J, alpha, nu, L):
    D, _ = lemma4_chain(J, alpha, nu, L)
    removed = []
    while sum(Fraction(1, n) for n in D) >= nu:
        T, _ = lemma4_chain(D, nu, nu / 2, L)
        w = min(T)
        removed.append(w)
        D = [n for n in D if n != w]
    return D, removed


def qd_scan(E_I, q, N, theta, L, y, omega0, c):
    lo = N**0.75
    hi = N ** (0.75 + theta)
    for d in range(1, int(hi // q) + 2):
        qd = q * d
        if not (lo <= qd <= hi * (1 + 1e-12)):
            continue
        fac = trial_factor(d)
        if any(p <= y for p, _ in fac) or len(fac) > omega0:
            continue
        dens = sum(Fraction(1, n) for n in E_I if n % qd == 0)
        if dens >= Fraction(c) / (qd * Fraction(L) ** 2):
            return d
    return None
