"""r-coloring experiments on [2, M].

Every class of a coloring is searched for a subset with reciprocal sum 1.
Reports are plain JSON; everything that varies between runs (timings, the
timestamp) lives under ``meta`` so the rest is byte-reproducible.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .arithmetic import recip_sum
from .subsets import NODE_BUDGET, SearchBudgetError, find_unit_subsets

STRATEGIES = ("random", "round_robin", "greedy_adversarial", "from_file")


class InfeasibleColoring(ValueError):
    def __init__(self, M: int, r: int, first_unplaceable: int):
        super().__init__(f"greedy coloring of [2, {M}] into {r} classes stalls at n={first_unplaceable}")
        self.M, self.r, self.first_unplaceable = M, r, first_unplaceable


@dataclass
class Coloring:
    M: int
    r: int
    assignment: dict[int, int]
    strategy: str
    seed: Optional[int] = None

    def __post_init__(self):
        if set(self.assignment) != set(range(2, self.M + 1)):
            raise ValueError("assignment must cover exactly [2, M]")
        if any(not 1 <= c <= self.r for c in self.assignment.values()):
            raise ValueError("class labels must lie in [1, r]")

    def classes(self) -> dict[int, list[int]]:
        out = {c: [] for c in range(1, self.r + 1)}
        for n in range(2, self.M + 1):
            out[self.assignment[n]].append(n)
        return out


def make_coloring(M: int, r: int, strategy: str = "random", seed: Optional[int] = None, assignment=None) -> Coloring:
    if M < 2 or r < 1:
        raise ValueError("need M >= 2 and r >= 1")
    ns = range(2, M + 1)
    if strategy == "round_robin":
        asg = {n: (n - 2) % r + 1 for n in ns}
    elif strategy == "random":
        rng = random.Random(seed)
        asg = {n: rng.randint(1, r) for n in ns}
    elif strategy == "greedy_adversarial":
        # first fit keeping each class strictly below 1
        sums = [Fraction(0)] * r
        asg = {}
        for n in ns:
            for c in range(r):
                if sums[c] + Fraction(1, n) < 1:
                    sums[c] += Fraction(1, n)
                    asg[n] = c + 1
                    break
            else:
                raise InfeasibleColoring(M, r, n)
    elif strategy == "from_file":
        if assignment is None:
            raise ValueError("from_file needs an assignment")
        if isinstance(assignment, (list, tuple)):
            asg = {n: int(c) for n, c in zip(ns, assignment)}
        else:
            asg = {int(k): int(v) for k, v in assignment.items()}
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return Coloring(M, r, asg, strategy, seed)


def greedy_limit(r: int, M_max: int = 10**6) -> int:
    """Largest M for which the greedy adversarial coloring of [2, M] exists."""
    sums = [Fraction(0)] * r
    for n in range(2, M_max + 1):
        for c in range(r):
            if sums[c] + Fraction(1, n) < 1:
                sums[c] += Fraction(1, n)
                break
        else:
            return n - 1
    return M_max


@dataclass
class ClassResult:
    label: int
    size: int
    recip_sum: Fraction
    found: bool
    decided: bool
    witness: Optional[list[int]] = None
    nodes: int = 0
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            "class": self.label,
            "size": self.size,
            "recip_sum": str(self.recip_sum),
            "found": self.found,
            "decided": self.decided,
            "witness": self.witness,
            "nodes": self.nodes,
        }


@dataclass
class ExperimentReport:
    inputs: dict
    classes: list[ClassResult]
    verdict: bool
    exact: bool
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for c in self.classes:
            if c.witness is not None and recip_sum(c.witness) != 1:
                raise AssertionError(f"class {c.label}: witness does not sum to 1")
        if self.verdict != any(c.found for c in self.classes):
            raise AssertionError("verdict must equal 'some class has a witness'")

    def to_dict(self, with_meta: bool = True) -> dict:
        d = {
            "inputs": self.inputs,
            "verdict": self.verdict,
            "exact": self.exact,
            "classes": [c.to_dict() for c in sorted(self.classes, key=lambda c: c.label)],
        }
        if with_meta:
            d["meta"] = self.meta
        return d

    def to_json(self, with_meta: bool = True) -> str:
        return json.dumps(self.to_dict(with_meta), sort_keys=True, indent=1)


def check_coloring(
    c: Coloring,
    node_budget: int = NODE_BUDGET,
    fail_fast: bool = False,
) -> ExperimentReport:
    """Search each class for a unit subset, heaviest class first."""
    t0 = time.perf_counter()
    parts = c.classes()
    order = sorted(parts, key=lambda k: (-recip_sum(parts[k]), k))
    results: list[ClassResult] = []
    found_any = False
    for label in order:
        vals = parts[label]
        s = recip_sum(vals)
        t = time.perf_counter()
        if fail_fast and found_any:
            results.append(ClassResult(label, len(vals), s, False, False))
            continue
        if s < 1:
            results.append(ClassResult(label, len(vals), s, False, True))
            continue
        try:
            res = find_unit_subsets(vals, cap=1, stop_after=1, node_budget=node_budget)
        except SearchBudgetError:
            results.append(ClassResult(label, len(vals), s, False, False, seconds=time.perf_counter() - t))
            continue
        ok = res.count > 0
        found_any |= ok
        results.append(
            ClassResult(
                label, len(vals), s, ok, ok or res.exact,
                list(res.witnesses[0]) if ok else None, res.nodes, time.perf_counter() - t,
            )
        )
    verdict = any(r.found for r in results)
    exact = verdict or all(r.decided for r in results)
    inputs = {"M": c.M, "r": c.r, "strategy": c.strategy, "seed": c.seed}
    meta = {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "seconds": time.perf_counter() - t0,
        "class_seconds": {r.label: r.seconds for r in results},
    }
    return ExperimentReport(inputs, results, verdict, exact, meta)


@dataclass
class SweepReport:
    r: int
    M_lo: int
    M_hi: int
    outcomes: dict  # strategy -> list of per-M records
    thresholds: dict  # strategy -> least M where every tested coloring has a unit subset
    note: str = (
        "experimental protocol chosen here; random strategies are reported per M, "
        "a true verdict at M does not imply one at M+1"
    )

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "M_lo": self.M_lo,
            "M_hi": self.M_hi,
            "outcomes": self.outcomes,
            "thresholds": self.thresholds,
            "note": self.note,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)


def sweep_threshold(
    r: int,
    strategies: Sequence[str] = ("round_robin", "random", "greedy_adversarial"),
    M_lo: int = 2,
    M_hi: int = 30,
    seeds: Sequence[int] = (0, 1, 2),
    node_budget: int = NODE_BUDGET,
    report_dir: Optional[Path] = None,
) -> SweepReport:
    outcomes: dict = {}
    thresholds: dict = {}
    for strat in strategies:
        recs = []
        use_seeds = list(seeds) if strat == "random" else [None]
        for M in range(M_lo, M_hi + 1):
            rec = {"M": M, "verdicts": [], "exact": True}
            for sd in use_seeds:
                try:
                    col = make_coloring(M, r, strat, sd)
                except InfeasibleColoring as exc:
                    rec["infeasible"] = exc.first_unplaceable
                    break
                rep = check_coloring(col, node_budget)
                rec["verdicts"].append(rep.verdict)
                rec["exact"] &= rep.exact
                if report_dir is not None:
                    save_report(rep, Path(report_dir) / f"{strat}_r{r}_M{M}_s{sd}.json")
            recs.append(rec)
        outcomes[strat] = recs
        ok = [rec["M"] for rec in recs if rec["verdicts"] and "infeasible" not in rec and all(rec["verdicts"])]
        thresholds[strat] = min(ok) if ok else None
    return SweepReport(r, M_lo, M_hi, outcomes, thresholds)


def save_report(report, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.to_json() + "\n")
    return path


def parse_config(text: str) -> dict:
    """key=value lines; '#' starts a comment. Values become int, float or str."""
    out = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {raw!r}")
        k, v = (s.strip() for s in line.split("=", 1))
        for conv in (int, float):
            try:
                out[k] = conv(v)
                break
            except ValueError:
                pass
        else:
            out[k] = v
    return out


def load_config(path) -> dict:
    return parse_config(Path(path).read_text())
