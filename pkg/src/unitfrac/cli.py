"""Command-line entry point: ``unitfrac <command> ...``.

Exit status is 0 whenever a run completes (whatever its verdict) and
nonzero on budget, input or IO errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from .arithmetic import IntSet
from .dickman import build_rho, rho_at, verify_section2
from .extraction import (
    DensityParams,
    ExtractionError,
    PreconditionError,
    lemma4_extract,
    prop1_construct,
    prop2_extract,
)
from .harness import (
    InfeasibleColoring,
    check_coloring,
    load_config,
    make_coloring,
    parse_config,
    sweep_threshold,
)
from .sieve import SieveBudgetError, SmoothQuery, enumerate_C, enumerate_Cprime
from .subsets import SearchBudgetError, exp_sum_count, find_unit_subsets


def _json_default(o):
    if isinstance(o, Fraction):
        return str(o)
    raise TypeError(type(o).__name__)


def parse_int_list(text: str) -> list[int]:
    """JSON array, or integers separated by newlines, commas or spaces."""
    text = text.strip()
    if text.startswith("["):
        return [int(x) for x in json.loads(text)]
    return [int(tok) for tok in text.replace(",", " ").split()]


def read_set(arg: str) -> list[int]:
    """A file path, or the list itself inline."""
    if arg.lstrip().startswith("[") or "," in arg:
        return parse_int_list(arg)
    p = Path(arg)
    if p.is_file():
        return parse_int_list(p.read_text())
    return parse_int_list(arg)


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def cmd_sieve(args):
    q = SmoothQuery(args.lo, args.hi, args.bound, args.eps)
    s = enumerate_Cprime(q) if args.eps is not None else enumerate_C(q)
    if args.json:
        _emit(args, json.dumps(list(s.values)))
    else:
        _emit(args, "\n".join(map(str, s.values)))


def cmd_rho(args):
    if args.table:
        t = build_rho(args.max_u, step=args.step)
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["u", "rho"])
        stride = max(1, int(round(args.every / t.grid_step)))
        for u, r in zip(t.u[::stride], t.rho[::stride]):
            w.writerow([f"{u:.10g}", repr(float(r))])
        _emit(args, buf.getvalue().rstrip("\n"))
    else:
        if args.u is None:
            raise SystemExit("rho: give --u or --table")
        t = build_rho(max(2.0, args.u), step=args.step)
        _emit(args, repr(rho_at(t, args.u)))


def cmd_verify(args):
    over = {}
    for k in ("u", "delta", "log_n_per_r", "target"):
        v = getattr(args, k)
        if v is not None:
            over[k] = v
    rep = verify_section2(**over)
    _emit(args, json.dumps(rep.to_dict(), indent=1, default=_json_default))


def cmd_find(args):
    D = IntSet(read_set(args.set))
    if args.method == "expsum":
        ev = exp_sum_count(D)
        out = {
            "count": ev.rounded_count,
            "witnesses": [],
            "method": "exp_sum",
            "exact": ev.exact,
            "P": ev.P,
            "total": ev.total,
            "rounding_gap": ev.rounding_gap,
            "counts": "nonempty subsets with integer reciprocal sum",
        }
    else:
        method = "branch_and_bound" if args.method == "bb" else "mitm"
        out = find_unit_subsets(D, cap=args.cap, method=method).to_dict()
    _emit(args, json.dumps(out, indent=1))


def _params_from(cfg: dict) -> DensityParams:
    keys = {
        "N", "theta", "delta", "nu", "alpha", "mu", "loglog_term", "nu_sub",
        "stop_sum", "entry_sum", "qd_constant", "merge_constant", "strict",
    }
    kw = {}
    for k, v in cfg.items():
        if k not in keys:
            continue
        if k in ("nu", "alpha", "mu", "nu_sub", "stop_sum", "entry_sum"):
            v = Fraction(str(v))
        if k == "strict":
            v = str(v).lower() in ("1", "true", "yes")
        kw[k] = v
    return DensityParams(**kw)


def cmd_extract(args):
    cfg = load_config(args.params) if args.params else {}
    cfg.update(parse_config("\n".join(args.set_param or [])))
    params = _params_from(cfg)
    S = IntSet(read_set(args.input))
    trace: list = []
    lines = []
    try:
        if args.which == "lemma4":
            rho = Fraction(str(cfg.get("rho", S.recip_sum)))
            mu = Fraction(str(cfg["mu"]))
            T = lemma4_extract(S, rho, mu, params, trace=trace)
            result = {"status": "ok", "set": list(T.values), "recip_sum": str(T.recip_sum)}
        elif args.which == "prop2":
            E = prop2_extract(S, params, trace=trace)
            result = {"status": "ok", "set": list(E.values), "recip_sum": str(E.recip_sum)}
        else:
            res = prop1_construct(S, params, h_budget=int(cfg.get("h_budget", 32)))
            trace = res.trace
            result = {
                "status": res.status,
                "set": list(res.D.values) if res.D is not None else None,
                "pieces": [list(p.values) for p in res.pieces],
                "property_violations": res.property_violations,
                "intervals_tested": res.intervals_tested,
            }
    except (ExtractionError, PreconditionError) as exc:
        trace = trace or getattr(exc, "trace", [])
        result = {"status": "error", "error": str(exc)}
    lines = [json.dumps(ev, default=_json_default, sort_keys=True) for ev in trace]
    lines.append(json.dumps({"op": "result", **result}, default=_json_default, sort_keys=True))
    _emit(args, "\n".join(lines))


def cmd_color(args):
    asg = None
    if args.strategy == "from_file":
        asg = json.loads(Path(args.assignment).read_text())
    try:
        col = make_coloring(args.M, args.r, args.strategy, args.seed, asg)
    except InfeasibleColoring as exc:
        _emit(args, json.dumps({"inputs": {"M": args.M, "r": args.r, "strategy": args.strategy},
                                "infeasible": True, "first_unplaceable": exc.first_unplaceable}))
        return
    rep = check_coloring(col, node_budget=args.node_budget)
    _emit(args, rep.to_json())


def cmd_sweep(args):
    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    seeds = [int(s) for s in args.seeds.split(",")]
    rep = sweep_threshold(args.r, strategies, args.m_lo, args.m_hi, seeds,
                          report_dir=Path(args.report_dir) if args.report_dir else None)
    _emit(args, rep.to_json())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="unitfrac", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.add_argument("--out", help="write output here instead of stdout")
        p.set_defaults(func=fn)
        return p

    p = add("sieve", cmd_sieve, help="smooth integers in [lo, hi]")
    p.add_argument("--lo", type=int, required=True)
    p.add_argument("--hi", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--eps", type=float, default=None, help="keep only normal integers")
    p.add_argument("--json", action="store_true")

    p = add("rho", cmd_rho, help="Dickman rho value or table")
    p.add_argument("--u", type=float)
    p.add_argument("--table", action="store_true")
    p.add_argument("--max-u", type=float, default=10.0)
    p.add_argument("--step", type=float, default=1e-4)
    p.add_argument("--every", type=float, default=0.01, help="table spacing")

    p = add("verify-constants", cmd_verify, help="recompute the density constants")
    p.add_argument("--u", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--log-n-per-r", dest="log_n_per_r", type=float)
    p.add_argument("--target", type=float)

    p = add("find", cmd_find, help="subsets with reciprocal sum 1")
    p.add_argument("--set", required=True, help="file or inline list")
    p.add_argument("--cap", type=int, default=100)
    p.add_argument("--method", choices=["bb", "mitm", "expsum"], default="bb")

    p = add("extract", cmd_extract, help="run an extraction chain")
    p.add_argument("which", choices=["lemma4", "prop2", "prop1"])
    p.add_argument("--input", required=True)
    p.add_argument("--params", help="key=value config file")
    p.add_argument("--set-param", action="append", metavar="KEY=VALUE", help="overrides the config file")

    p = add("color", cmd_color, help="check one coloring of [2, M]")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--strategy", default="random",
                   choices=["random", "round_robin", "greedy_adversarial", "from_file"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--assignment", help="JSON list/dict for from_file")
    p.add_argument("--node-budget", type=int, default=5_000_000)

    p = add("sweep", cmd_sweep, help="sweep M for a fixed r")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--strategies", default="round_robin,random,greedy_adversarial")
    p.add_argument("--m-lo", type=int, default=2)
    p.add_argument("--m-hi", type=int, default=30)
    p.add_argument("--seeds", default="0,1,2")
    p.add_argument("--report-dir")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (SieveBudgetError, SearchBudgetError) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
