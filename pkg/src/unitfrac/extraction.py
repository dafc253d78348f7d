"""Greedy extraction chains and interval classification.

All reciprocal-sum comparisons are exact. Each chain works on integer
weights over a single common denominator (the lcm of the starting set), so
a threshold test such as

    sum_{n in S, q | n} 1/n  <  c / q

becomes one big-integer comparison instead of Fraction arithmetic.

At feasible sizes the iterated logarithms log log N, log log log N, ... are
tiny or negative; every one of them is clamped below at 1 and the clamps are
listed in :attr:`DensityParams.clamps`.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Optional

from .arithmetic import IntSet, factorize, recip_sum

DEFAULT_MERGE_CONSTANT = (6 / math.e - 2) / 80


class ExtractionError(RuntimeError):
    """A chain could not reach its postcondition. ``trace`` holds the steps taken."""

    def __init__(self, msg: str, trace: Optional[list] = None):
        super().__init__(msg)
        self.trace = trace or []


class PreconditionError(ValueError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class DensityParams:
    N: int
    theta: float = 0.2
    delta: float = 0.04
    nu: Fraction = Fraction(2)
    alpha: Optional[Fraction] = None
    mu: Optional[Fraction] = None
    loglog_term: Optional[float] = None
    nu_sub: Fraction = Fraction(2, 3)
    stop_sum: Fraction = Fraction(8, 3)
    entry_sum: Fraction = Fraction(6)
    qd_constant: float = 1.0
    merge_constant: float = DEFAULT_MERGE_CONSTANT
    strict: bool = False

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        for k in ("nu", "nu_sub", "stop_sum", "entry_sum"):
            set_(k, _frac(getattr(self, k)))
        for k in ("alpha", "mu"):
            if getattr(self, k) is not None:
                set_(k, _frac(getattr(self, k)))
        if self.loglog_term is None:
            set_("loglog_term", self.iterated(2))
        if self.N < 2:
            raise ValueError("N must be >= 2")
        if not self.theta > 0:
            raise ValueError("theta must be > 0")
        if self.nu <= 0:
            raise ValueError("nu must be > 0")
        if self.alpha is not None and not self.alpha > self.nu:
            raise ValueError("need alpha > nu")
        if self.strict:
            if not self.theta + self.delta < 0.25:
                raise ValueError("strict mode needs theta + delta < 1/4")
            if (self.nu, self.nu_sub, self.stop_sum, self.entry_sum) != (
                2, Fraction(2, 3), Fraction(8, 3), 6,
            ):
                raise ValueError("strict mode fixes nu=2, nu_sub=2/3, stop=8/3, entry=6")

    def replace(self, **kw) -> "DensityParams":
        return dataclasses.replace(self, **kw)

    def iterated(self, depth: int) -> float:
        """log^{(depth)} N with each stage clamped below at 1."""
        v = float(self.N)
        for _ in range(depth):
            v = max(math.log(v), 1.0) if v > 1 else 1.0
        return v

    @property
    def clamps(self) -> dict:
        out = {}
        v = float(self.N)
        for depth in (1, 2, 3, 4):
            raw = math.log(v) if v > 0 else float("-inf")
            if raw < 1:
                out[f"log^{depth}"] = raw
            v = max(raw, 1.0)
        return out

    @property
    def L(self) -> Fraction:
        return Fraction(self.loglog_term)

    @property
    def y(self) -> float:
        return math.exp((0.125 - self.theta / 2) * math.log(self.N) / self.loglog_term)

    @property
    def omega0(self) -> float:
        return self.loglog_term / self.iterated(4)

    @property
    def prop3_hypothesis(self) -> float:
        """Allowed number of non-dividing elements, N^(1-theta) / loglog^2."""
        return self.N ** (1 - self.theta) / self.loglog_term**2

    @property
    def interval_length(self) -> float:
        return self.N**0.75

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in d.items()}


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def around(cls, h, length) -> "Interval":
        """Integers in [h - length/2, h + length/2]."""
        h, half = _frac(h), _frac(length) / 2
        return cls(math.ceil(h - half), math.floor(h + half))

    def __len__(self):
        return self.hi - self.lo + 1

    def __iter__(self):
        return iter(range(self.lo, self.hi + 1))

    def __contains__(self, x):
        return self.lo <= x <= self.hi

    def multiples(self, n: int) -> range:
        return range(-(-self.lo // n) * n, self.hi + 1, n)


# -- weighted working sets ------------------------------------------------


class _Weights:
    """Integer weights base // n for a fixed common denominator ``base``."""

    def __init__(self, values: Iterable[int]):
        values = list(values)
        self.base = reduce(math.lcm, values, 1)
        self.w = {v: self.base // v for v in values}
        self._qs = {v: _all_prime_powers(v) for v in values}

    def q_sums(self, values) -> dict[int, int]:
        sums: dict[int, int] = {}
        for v in values:
            wv = self.w[v]
            for q in self._qs[v]:
                sums[q] = sums.get(q, 0) + wv
        return sums

    def below(self, s: int, q: int, c: Fraction) -> bool:
        """True iff s / base < c / q."""
        return q * s * c.denominator < c.numerator * self.base

    def above(self, s: int, q: int, c: Fraction) -> bool:
        """True iff s / base > c / q."""
        return q * s * c.denominator > c.numerator * self.base


def _all_prime_powers(v: int) -> tuple[int, ...]:
    return tuple(p**j for p, a in factorize(v).factors for j in range(1, a + 1))


def _lemma4_chain(values, W: _Weights, c: Fraction, trace: Optional[list]):
    """Repeatedly drop all multiples of the smallest q whose multiples weigh < c/q."""
    cur = sorted(values)
    sums = W.q_sums(cur)
    while True:
        q = next((q for q in sorted(sums) if W.below(sums[q], q, c)), None)
        if q is None:
            return cur
        gone = [v for v in cur if v % q == 0]
        cur = [v for v in cur if v % q]
        for v in gone:
            for qq in W._qs[v]:
                sums[qq] -= W.w[v]
                if sums[qq] == 0:
                    del sums[qq]
        if trace is not None:
            trace.append({"op": "lemma4_remove", "q": q, "removed": len(gone), "remaining": len(cur)})


def _lemma4_threshold(rho: Fraction, mu: Fraction, params: DensityParams) -> Fraction:
    return (rho - mu) / (2 * params.L)


def lemma4_extract(
    S: IntSet,
    rho,
    mu,
    params: DensityParams,
    trace: Optional[list] = None,
    check_hypotheses: bool = True,
) -> IntSet:
    """Subset T of S with sum 1/n > mu and every q in Q_T dense:

        sum_{n in T, q | n} 1/n > (rho - mu) / (2 q loglog N).

    Built by removing, while one exists, all multiples of the smallest prime
    power q that violates the density bound.
    """
    rho, mu = _frac(rho), _frac(mu)
    total = S.recip_sum
    if not (total >= rho > mu):
        raise PreconditionError(f"need recip_sum(S) >= rho > mu, got {total}, {rho}, {mu}")
    if check_hypotheses and S.q_set and max(S.q_set) >= params.N:
        raise PreconditionError(f"prime power {max(S.q_set)} of S is not below N={params.N}")
    W = _Weights(S.values)
    local: list = []
    T = _lemma4_chain(S.values, W, _lemma4_threshold(rho, mu, params), local)
    if trace is not None:
        trace.extend(local)
    s = recip_sum(T)
    if not s > mu:
        raise ExtractionError(f"thinning chain ended at sum {s} <= mu = {mu}", local)
    return IntSet(f for f in S.elements if f.value in set(T))


def lemma4_violations(T: IntSet, rho, mu, params: DensityParams) -> list[int]:
    """Prime powers of T breaking the density bound, by direct exact re-scan."""
    c = _lemma4_threshold(_frac(rho), _frac(mu), params)
    bad = []
    for q in sorted(T.q_set):
        s = recip_sum([v for v in T.values if v % q == 0])
        if not s > c / q:
            bad.append(q)
    return bad


def prop2_density_constant(params: DensityParams, alpha: Fraction) -> Fraction:
    return min(params.nu, alpha - params.nu) / (5 * params.L)


def prop2_violations(E: IntSet, params: DensityParams, alpha) -> list[int]:
    c = prop2_density_constant(params, _frac(alpha))
    bad = []
    for q in sorted(E.q_set):
        s = recip_sum([v for v in E.values if v % q == 0])
        if not s > c / q:
            bad.append(q)
    return bad


def prop2_extract(
    J: IntSet,
    params: DensityParams,
    trace: Optional[list] = None,
    check_hypotheses: bool = True,
) -> IntSet:
    """Subset E of J with sum 1/n in [nu - 1/N, nu) and every q in Q_E dense:

        sum_{n in E, q | n} 1/n > min(nu, alpha - nu) / (5 q loglog N).

    First a thinning pass with (alpha, nu); then, while the sum is still >= nu,
    rerun the chain with (nu, nu/2) and delete the smallest survivor.
    """
    nu = params.nu
    alpha = params.alpha if params.alpha is not None else J.recip_sum
    total = J.recip_sum
    if not (total >= alpha > nu):
        raise PreconditionError(f"need recip_sum(J) >= alpha > nu, got {total}, {alpha}, {nu}")
    if check_hypotheses and J.values[0] < params.N:
        raise PreconditionError(f"element {J.values[0]} below N={params.N}")
    if check_hypotheses and J.q_set and max(J.q_set) >= params.N:
        raise PreconditionError(f"prime power {max(J.q_set)} of J is not below N={params.N}")

    local: list = []
    W = _Weights(J.values)
    cur = _lemma4_chain(J.values, W, _lemma4_threshold(alpha, nu, params), local)
    s = sum(W.w[v] for v in cur)
    if not s * nu.denominator > nu.numerator * W.base:
        raise ExtractionError("initial thinning pass ended at or below nu", local)
    local.append({"op": "prop2_start", "size": len(cur)})

    c_half = _lemma4_threshold(nu, nu / 2, params)
    sums = W.q_sums(cur)
    cur_set = set(cur)
    min_floor = Fraction(1, params.N)
    while s * nu.denominator >= nu.numerator * W.base:
        # with every q dense enough, the chain keeps everything; skip rerunning it
        if any(W.below(sums[q], q, c_half) for q in sums):
            T = _lemma4_chain(sorted(cur_set), W, c_half, None)
            if not T or Fraction(sum(W.w[v] for v in T), W.base) <= nu / 2:
                raise ExtractionError("inner thinning pass fell to nu/2", local)
            w = T[0]
        else:
            w = min(cur_set)
        step = Fraction(W.w[w], W.base)
        if step > min_floor:
            local.append({"op": "prop2_overshoot_risk", "w": w})
        cur_set.remove(w)
        s -= W.w[w]
        for q in W._qs[w]:
            sums[q] -= W.w[w]
            if sums[q] == 0:
                del sums[q]
        local.append({"op": "prop2_remove", "w": w, "sum": str(Fraction(s, W.base))})

    if trace is not None:
        trace.extend(local)
    final = Fraction(s, W.base)
    if not (nu - min_floor <= final < nu):
        raise ExtractionError(f"window missed: sum {final} not in [{nu - min_floor}, {nu})", local)
    E = IntSet(f for f in J.elements if f.value in cur_set)
    bad = prop2_violations(E, params, alpha)
    if bad:
        raise ExtractionError(f"density bound fails for q in {bad[:10]}", local)
    return E


# -- intervals ------------------------------------------------------------


def non_divisors(E: IntSet, I: Interval) -> int:
    """How many n in E have no multiple in I."""
    return sum(1 for n in E.values if I.hi // n < -(-I.lo // n))


@dataclass
class Prop3Outcome:
    case: str  # "A", "B" or "neither"
    non_divisor_count: int
    hypothesis_holds: bool
    w: Optional[int] = None
    w1: Optional[int] = None
    w2: Optional[int] = None
    unique: Optional[bool] = None
    uncovered: Optional[int] = None
    sigma_w1: Optional[Fraction] = None
    sigma_w2: Optional[Fraction] = None

    def to_dict(self) -> dict:
        return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in dataclasses.asdict(self).items()}


def _sigma_dividing(E: IntSet, w: int) -> Fraction:
    return sum((Fraction(1, q) for q in E.q_set if w % q == 0), Fraction(0))


def prop3_classify(E: IntSet, I: Interval, params: DensityParams) -> Prop3Outcome:
    """Case A: one x in I divisible by all of E. Case B: two witnesses w1 != w2 in I
    that between them are divisible by all but < 2 N^(1-theta)/loglog^2 elements of E,
    with lcm(E) | w1 w2.
    """
    count = non_divisors(E, I)
    limit = params.prop3_hypothesis
    if count > limit:
        return Prop3Outcome("neither", count, False)
    L = E.lcm
    m = -(-I.lo // L) * L
    if m <= I.hi:
        return Prop3Outcome("A", count, True, w=m, unique=L > I.hi - I.lo)

    vals = E.values
    masks: dict[int, int] = {}
    for i, n in enumerate(vals):
        for x in I.multiples(n):
            masks[x] = masks.get(x, 0) | (1 << i)
    full = len(vals)
    cands = sorted(masks, key=lambda x: (-masks[x].bit_count(), x))
    need = full - 2 * limit  # covered count must exceed this
    best = None
    for a_i, x1 in enumerate(cands):
        c1 = masks[x1].bit_count()
        if best is not None and c1 + c1 < best[0]:
            break
        for x2 in cands[a_i + 1 :]:
            c2 = masks[x2].bit_count()
            if c1 + c2 <= need or (best is not None and c1 + c2 < best[0]):
                break
            cov = (masks[x1] | masks[x2]).bit_count()
            if cov > need and (x1 * x2) % L == 0:
                key = (cov, -min(x1, x2), -max(x1, x2))
                if best is None or key > best[:3]:
                    best = (cov, -min(x1, x2), -max(x1, x2), x1, x2)
    if best is None:
        return Prop3Outcome("neither", count, True)
    x1, x2 = best[3], best[4]
    r1 = recip_sum([n for n in vals if x1 % n == 0])
    r2 = recip_sum([n for n in vals if x2 % n == 0])
    if (r2, -x2) > (r1, -x1):
        x1, x2 = x2, x1
    return Prop3Outcome(
        "B", count, True, w1=x1, w2=x2, uncovered=full - best[0],
        sigma_w1=_sigma_dividing(E, x1), sigma_w2=_sigma_dividing(E, x2),
    )


def _divisors_from(factors: list[tuple[int, int]]):
    divs = [(1, 0)]
    for p, a in factors:
        divs = [(d * p**j, w + (j > 0)) for d, w in divs for j in range(a + 1)]
    return divs


def find_qd(E_I: IntSet, q: int, params: DensityParams, constant: Optional[float] = None) -> Optional[int]:
    """Smallest d with qd in [N^(3/4), N^(3/4+theta)], all primes of d above y,
    omega(d) <= omega0 and

        sum_{n in E_I, qd | n} 1/n >= c / (qd loglog^2).

    Returns None when no such d exists.
    """
    c = params.qd_constant if constant is None else constant
    if math.isinf(c):
        return None
    mult = [n for n in E_I.values if n % q == 0]
    if not mult:
        return None
    N = params.N
    y, w0 = params.y, params.omega0
    log_hi = (0.75 + params.theta) * math.log(N)
    cands: set[int] = set()
    for n in mult:
        fac = [(p, a) for p, a in factorize(n // q).factors if p > y] if n > q else []
        for d, w in _divisors_from(fac):
            qd = q * d
            if w <= w0 and qd**4 >= N**3 and math.log(qd) <= log_hi + 1e-12:
                cands.add(d)
    cf = Fraction(c) / params.L**2
    for d in sorted(cands):
        qd = q * d
        dens = recip_sum([n for n in mult if n % qd == 0])
        if dens >= cf / qd:
            return d
    return None


# -- the outer construction ----------------------------------------------


@dataclass
class Prop1Result:
    status: str  # "step3", "merged", "exhausted"
    D: Optional[IntSet]
    trace: list = field(default_factory=list)
    pieces: list = field(default_factory=list)
    property_violations: list = field(default_factory=list)
    intervals_tested: int = 0


def candidate_hs(E: IntSet, params: DensityParams, budget: int, hs=None) -> list[int]:
    """Integers h with N/6 <= h <= P/2 to probe: user list, an arithmetic
    progression, and points sitting on multiples of the largest elements."""
    if hs is not None:
        return sorted({int(h) for h in hs})[:budget]
    lo = math.ceil(params.N / 6)
    hi = E.lcm // 2
    if hi < lo:
        return []
    half = max(1, budget // 2)
    span = min(hi, lo + 10**12)
    step = max(1, (span - lo) // half)
    ap = list(range(lo, span + 1, step))[:half]
    adv = []
    for n in sorted(E.values, reverse=True):
        for k in (1, 2, 3):
            h = n * k * max(1, -(-lo // n))
            if lo <= h <= hi:
                adv.append(h)
        for m in E.values:
            if m < n:
                l2 = math.lcm(n, m)
                if lo <= l2 <= hi:
                    adv.append(l2)
        if len(adv) >= budget:
            break
    out = sorted(set(ap + adv))
    # keep both families represented when trimming
    if len(out) > budget:
        keep = set(ap[: budget // 2]) | set(adv[: budget - budget // 2])
        out = sorted(keep)
    return out


def _test_intervals(E: IntSet, params: DensityParams, hs: list[int], trace: list):
    outs = []
    for h in hs:
        I = Interval.around(h, params.interval_length)
        o = prop3_classify(E, I, params)
        outs.append((h, I, o))
        trace.append({"op": "prop3", "h": h, "I": [I.lo, I.hi], **o.to_dict()})
    return outs


def prop1_construct(
    C: IntSet,
    params: DensityParams,
    h_budget: int = 32,
    hs=None,
    max_rounds: int = 64,
) -> Prop1Result:
    """Run the iterative construction and return the final set D with its trace.

    Each round extracts E (sum in [nu - 1/N, nu)) from what is left of C and
    probes intervals around the candidate h values. If every probe that meets
    the hypothesis lands in case A, D = E. A case-B probe instead yields
    E* (divisors of the heavier witness), from which a piece D_j with sum near
    nu_sub is carved and removed from C. Once the remaining sum is <= stop_sum
    the three pieces whose common prime powers weigh the most are merged.
    """
    trace: list = [{"op": "params", **params.to_dict(), "clamps": params.clamps}]
    if not C.recip_sum > params.entry_sum:
        raise PreconditionError(f"recip_sum(C) = {float(C.recip_sum):.6f} not above {params.entry_sum}")
    if params.stop_sum < params.nu:
        raise PreconditionError("stop_sum must be >= nu")

    pieces: list[IntSet] = []
    Cj = C
    tested = 0
    for j in range(max_rounds):
        alpha = Cj.recip_sum
        trace.append({"op": "round", "j": j, "size": len(Cj), "sum": float(alpha)})
        try:
            E = prop2_extract(Cj, params.replace(alpha=alpha, nu=params.nu))
        except (ExtractionError, PreconditionError) as exc:
            trace.append({"op": "prop2_failed", "j": j, "error": str(exc)})
            return Prop1Result("exhausted", None, trace, pieces, [], tested)
        trace.append({"op": "E", "j": j, "size": len(E), "sum": str(E.recip_sum)})

        hlist = candidate_hs(E, params, h_budget, hs)
        outs = _test_intervals(E, params, hlist, trace)
        tested += len(outs)
        caseB = next(((h, I, o) for h, I, o in outs if o.case == "B"), None)
        if caseB is None:
            viol = [h for h, _, o in outs if o.hypothesis_holds and o.case != "A"]
            trace.append({"op": "step3_accept", "j": j, "intervals": len(outs), "violations": viol})
            return Prop1Result("step3", E, trace, pieces, viol, tested)

        h, I, o = caseB
        w = o.w1  # w1 is already the witness with the larger divisor reciprocal sum
        Estar = E.where(lambda n: w % n == 0)
        trace.append({"op": "E_star", "j": j, "h": h, "w": w, "size": len(Estar), "sum": str(Estar.recip_sum)})
        try:
            Dj = prop2_extract(Estar, params.replace(alpha=Estar.recip_sum, nu=params.nu_sub))
        except (ExtractionError, PreconditionError, ValueError) as exc:
            trace.append({"op": "step5_failed", "j": j, "error": str(exc)})
            return Prop1Result("exhausted", None, trace, pieces, [], tested)
        pieces.append(Dj)
        Cj = Cj.without(Dj.values)
        trace.append({"op": "D_j", "j": j, "size": len(Dj), "sum": str(Dj.recip_sum), "left": float(Cj.recip_sum)})
        if Cj.recip_sum <= params.stop_sum:
            trace.append({"op": "stop", "j": j, "pieces": len(pieces)})
            break
    else:
        trace.append({"op": "round_limit", "rounds": max_rounds})
        return Prop1Result("exhausted", None, trace, pieces, [], tested)

    if len(pieces) < 3:
        trace.append({"op": "merge_failed", "reason": f"only {len(pieces)} pieces"})
        return Prop1Result("exhausted", None, trace, pieces, [], tested)

    best = None
    for tri in itertools.combinations(range(len(pieces)), 3):
        common = reduce(frozenset.intersection, (pieces[i].q_set for i in tri))
        sig = sum((Fraction(1, q) for q in common), Fraction(0))
        if best is None or sig > best[0]:
            best = (sig, tri)
    sig, tri = best
    need = params.merge_constant * params.loglog_term
    trace.append({"op": "merge", "triple": list(tri), "sigma_common": float(sig), "threshold": need})
    if not sig > need:
        trace.append({"op": "merge_failed", "reason": "common prime powers too light"})
        return Prop1Result("exhausted", None, trace, pieces, [], tested)
    D = pieces[tri[0]].union(pieces[tri[1]], pieces[tri[2]])
    top = 3 * params.nu_sub
    if not (top - Fraction(3, params.N) <= D.recip_sum < top):
        trace.append({"op": "merge_failed", "reason": f"sum {D.recip_sum} outside window"})
        return Prop1Result("exhausted", None, trace, pieces, [], tested)
    outs = _test_intervals(D, params, candidate_hs(D, params, h_budget, hs), trace)
    tested += len(outs)
    viol = [h for h, _, o in outs if o.hypothesis_holds and o.case != "A"]
    return Prop1Result("merged", D, trace, pieces, viol, tested)
