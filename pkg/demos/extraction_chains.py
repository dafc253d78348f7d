"""
Extraction chains
=================

Thin a set until every prime power that divides one of its elements is
"dense", carve out a piece whose reciprocal sum lands in a narrow window,
and run the interval-probing construction that glues pieces together.
"""

from fractions import Fraction

from unitfrac.arithmetic import IntSet
from unitfrac.extraction import (
    DensityParams,
    Interval,
    lemma4_extract,
    prop1_construct,
    prop2_extract,
    prop3_classify,
)
from unitfrac.sieve import SmoothQuery, enumerate_C

# -- thinning -------------------------------------------------------------
# 35 is the only multiple of 5 and 7, and too light to keep them
S = IntSet([3, 4, 6, 12, 35])
p = DensityParams(8, loglog_term=1.0)
trace = []
T = lemma4_extract(S, Fraction(181, 210), Fraction(1, 2), p, trace=trace)
print("thinned:", list(T), "removed multiples of", [e["q"] for e in trace])

# -- window extraction ----------------------------------------------------
N = 200
J = enumerate_C(SmoothQuery(N, 3 * N, N - 1))
p = DensityParams(N, nu=Fraction(1, 2))
E = prop2_extract(J, p)
print(f"|J|={len(J)} sum {float(J.recip_sum):.4f} -> |E|={len(E)} sum {float(E.recip_sum):.6f}"
      f" in [{float(p.nu - Fraction(1, N)):.6f}, {float(p.nu)})")

# -- interval classification ----------------------------------------------
print(prop3_classify(IntSet([4, 9]), Interval(35, 37), DensityParams(100)))
print(prop3_classify(IntSet([2, 3, 6]), Interval(7, 11), DensityParams(10)))

# -- the full construction ------------------------------------------------
# C holds the divisors >= 100 of two integers 24 apart, so every probe near
# them lands in case B and the construction has to carve pieces and merge.
w1, w2 = 282720, 282744
C = IntSet(sorted({d for w in (w1, w2) for d in range(100, w + 1) if w % d == 0}))
p = DensityParams(
    100, theta=0.2, nu=Fraction(1, 10), nu_sub=Fraction(1, 30),
    stop_sum=Fraction(1, 5), entry_sum=Fraction(1, 4), merge_constant=0.0,
)
res = prop1_construct(C, p, hs=[(w1 + w2) // 2])
print("status:", res.status, " pieces:", [len(x) for x in res.pieces],
      " final sum:", res.D.recip_sum if res.D is not None else None)
for ev in res.trace:
    if ev["op"] in ("round", "E_star", "D_j", "merge"):
        print("  ", ev)
