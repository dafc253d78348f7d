"""
Smooth integers and normal integers
===================================

Enumerate the integers in a range whose prime powers are all below a bound,
then keep only the "normal" ones, whose number of prime factors is close to
log log n.
"""

import math

from unitfrac.sieve import SmoothQuery, count_smooth, enumerate_C, enumerate_Cprime
from unitfrac.dickman import build_rho, rho_at

# a small range first, small enough to check by eye
q = SmoothQuery(lo=4, hi=20, smooth_bound=4)
print("4-smooth (prime powers <= 4) in [4, 20]:", list(enumerate_C(q)))

# a bigger window: integers in [10^5, 2*10^5] with prime powers <= 300
q = SmoothQuery(10**5, 2 * 10**5, 300)
C = enumerate_C(q)
print(f"{len(C)} smooth integers, reciprocal sum {float(C.recip_sum):.5f}")

# the normality filter: |omega(n) - loglog n| and |Omega(n) - loglog n| <= eps * loglog n,
# with log log n clamped at 1 because it is tiny at this size
for eps in (0.25, 0.5, 1.0):
    Cp = enumerate_Cprime(SmoothQuery(10**5, 2 * 10**5, 300, normality_eps=eps))
    print(f"  eps={eps}: {len(Cp)} normal ones")

# smooth counts against Dickman's rho. The match is good at u = 2 and
# drifts as u grows, because Psi(x, y)/x approaches rho(u) only slowly in x.
table = build_rho(4.0)
x = 10**6
for u in (2.0, 2.5, 3.0):
    y = round(x ** (1 / u))
    ratio = count_smooth(x, y) / x
    print(f"u={u}: Psi(x, y)/x = {ratio:.4f}, rho(u) = {rho_at(table, math.log(x) / math.log(y)):.4f}")
