"""Dickman's rho function and the smooth reciprocal-sum estimate.

rho is marched one unit interval at a time through the integral form

    u rho(u) = int_{u-1}^{u} rho(t) dt.

On [k, k+1] write g(u) = int_{u-1}^{k} rho (known from the previous
interval). The equation becomes linear in F(u) = int_k^u rho and solves to

    rho(u) = g(u) / u + int_k^u g(t) / t^2 dt,

a sum of positive terms, so relative accuracy survives even where rho is
astronomically small. The identity itself is re-checked afterwards with
exact integrals of the interpolating splines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import BSpline, make_interp_spline

DEFAULT_STEP = 1e-4
DEFAULT_TOL = 1e-8
MAX_U = 50.0


class RhoToleranceError(RuntimeError):
    pass


@dataclass
class RhoTable:
    grid_step: float
    max_u: float
    u: np.ndarray
    rho: np.ndarray
    order: int = 3
    tol: float = DEFAULT_TOL
    max_residual: float = 0.0
    # one spline per unit interval [k, k+1], k = 1 .. ceil(max_u) - 1
    pieces: list[BSpline] = field(default_factory=list, repr=False)
    antideriv: list[BSpline] = field(default_factory=list, repr=False)

    @property
    def values(self):
        return list(zip(self.u.tolist(), self.rho.tolist()))

    def __call__(self, u):
        return rho_at(self, u)

    def integral(self, a: float, b: float) -> float:
        return integrate_rho(self, a, b)


def _points_per_unit(step: float) -> int:
    m = int(round(1.0 / step))
    if m < 4:
        raise ValueError("grid step must be <= 1/4")
    if m % 2:
        m += 1  # Simpson wants an even panel count
    return m


def build_rho(
    max_u: float = 10.0,
    tol: float = DEFAULT_TOL,
    step: float = DEFAULT_STEP,
    n_verify: int = 1000,
    seed: int = 0,
) -> RhoTable:
    if not (0 < max_u <= MAX_U):
        raise ValueError(f"max_u must lie in (0, {MAX_U}]")
    if tol < 1e-12:
        raise ValueError("tol must be >= 1e-12")
    m = _points_per_unit(step)
    h = 1.0 / m
    K = max(1, math.ceil(max_u))

    local = np.linspace(0.0, 1.0, m + 1)
    prev = np.ones(m + 1)  # rho on [0, 1]
    us, rhos = [local.copy()], [prev.copy()]
    pieces, antis = [], []
    for k in range(1, K):
        t = k + local
        # tail integral of the previous interval, accumulated right to left
        g = cumulative_simpson(prev[::-1], dx=h, initial=0.0)[::-1]
        cur = g / t + cumulative_simpson(g / t**2, dx=h, initial=0.0)
        spl = make_interp_spline(t, cur, k=3)
        pieces.append(spl)
        antis.append(spl.antiderivative())
        us.append(t[1:])
        rhos.append(cur[1:])
        prev = cur

    u = np.concatenate(us)
    rho = np.concatenate(rhos)
    table = RhoTable(h, float(max_u), u, rho, 3, tol, 0.0, pieces, antis)
    if K > 1:
        rng = np.random.default_rng(seed)
        probe = rng.uniform(1.0, min(max_u, K), n_verify)
        table.max_residual = float(np.max(np.abs(identity_residual(table, probe))))
        if not table.max_residual <= tol:
            raise RhoToleranceError(
                f"integral-identity residual {table.max_residual:.3e} exceeds tol {tol:.1e} at step {h}"
            )
    return table


def _piece_index(table: RhoTable, u: float) -> int:
    return min(int(math.floor(u)) - 1, len(table.pieces) - 1)


def rho_at(table: RhoTable, u):
    if np.ndim(u):
        return np.array([rho_at(table, x) for x in np.asarray(u, dtype=float)])
    u = float(u)
    if u < 0 or u > table.max_u + 1e-12:
        raise ValueError(f"u={u} outside [0, {table.max_u}]")
    if u <= 1.0:
        return 1.0
    return float(table.pieces[_piece_index(table, u)](u))


def integrate_rho(table: RhoTable, a: float, b: float) -> float:
    """int_a^b rho(w) dw for 0 <= a <= b <= max_u."""
    if not (0 <= a <= b <= table.max_u + 1e-12):
        raise ValueError(f"[{a}, {b}] outside [0, {table.max_u}]")
    total = max(0.0, min(b, 1.0) - a)
    lo = max(a, 1.0)
    # piece by piece, so small tails are not lost against large prefixes
    while lo < b:
        i = _piece_index(table, lo)
        hi = b if i == len(table.pieces) - 1 else min(b, i + 2.0)
        anti = table.antideriv[i]
        total += float(anti(hi) - anti(lo))
        lo = hi
    return total


def identity_residual(table: RhoTable, us) -> np.ndarray:
    us = np.atleast_1d(np.asarray(us, dtype=float))
    return np.array(
        [x * rho_at(table, x) - integrate_rho(table, max(x - 1.0, 0.0), x) for x in us]
    )


def recip_sum_estimate(log_n: float, u: float, delta: float, table: RhoTable) -> float:
    """(log N / u) * int_u^{u(1+delta)} rho(w) dw.

    Asymptotic value of sum 1/n over N < n < N^(1+delta) whose prime powers
    are all <= N^(1/u).
    """
    if u < 1:
        raise ValueError("u must be >= 1")
    if delta <= 0:
        raise ValueError("delta must be > 0")
    if u * (1 + delta) > table.max_u:
        raise ValueError(f"u(1+delta) = {u * (1 + delta)} exceeds table range {table.max_u}")
    return log_n / u * integrate_rho(table, u, u * (1 + delta))


@dataclass
class ConstantCheck:
    name: str
    passed: bool
    value: Optional[float]
    threshold: Optional[float]
    detail: str = ""


@dataclass
class ConstantsReport:
    params: dict
    checks: list[ConstantCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "params": self.params,
            "passed": self.passed,
            "checks": [asdict(c) for c in self.checks],
        }


CONSTANT_DEFAULTS = {
    "log_n_per_r": 163550.0,
    "u": 4.32,
    "delta": None,  # 1/4 - 1/u - 0.0001 when absent
    "slack": 0.0001,
    "target": 6.0001,
    "upper_exponent": 166562,
    "b_exponent": 167000,
    "step": DEFAULT_STEP,
    "tol": DEFAULT_TOL,
}


def verify_section2(table: Optional[RhoTable] = None, **overrides) -> ConstantsReport:
    """Recompute the density constants behind the choice of b.

    (a) the smooth reciprocal sum per unit r exceeds ``target``;
    (b) log_n_per_r * (1 + delta) rounds to ``upper_exponent``;
    (c) that exponent is below ``b_exponent``.
    Failures are recorded in the report, never raised.
    """
    unknown = set(overrides) - set(CONSTANT_DEFAULTS)
    if unknown:
        raise TypeError(f"unknown overrides {sorted(unknown)}")
    p = {**CONSTANT_DEFAULTS, **overrides}
    if p["delta"] is None:
        p["delta"] = 0.25 - 1.0 / p["u"] - p["slack"]
    u, delta = p["u"], p["delta"]

    checks = []
    try:
        if table is None or table.max_u < u * (1 + delta):
            table = build_rho(max(2.0, math.ceil(u * (1 + max(delta, 0)))), p["tol"], p["step"])
        est = recip_sum_estimate(p["log_n_per_r"], u, delta, table)
        margin = est / p["target"] - 1.0
        checks.append(
            ConstantCheck(
                "reciprocal_sum_exceeds_target",
                est > p["target"],
                est,
                p["target"],
                f"relative margin {margin:+.4%}",
            )
        )
    except ValueError as exc:
        checks.append(ConstantCheck("reciprocal_sum_exceeds_target", False, None, p["target"], str(exc)))

    upper = p["log_n_per_r"] * (1 + delta)
    checks.append(
        ConstantCheck(
            "upper_exponent_rounds",
            round(upper) == p["upper_exponent"],
            upper,
            float(p["upper_exponent"]),
            f"round({upper:.4f}) = {round(upper)}",
        )
    )
    checks.append(
        ConstantCheck(
            "upper_exponent_below_b",
            round(upper) < p["b_exponent"],
            float(round(upper)),
            float(p["b_exponent"]),
        )
    )
    return ConstantsReport(p, checks)
