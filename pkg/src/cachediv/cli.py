"""Command-line front end.

    cachediv simulate --n 100 --k 0.5 --alpha 2 --seed 42
    cachediv sweep --n-range 30:200:10 --k 0.5 --alpha 2 -o fig3_a2.csv
    cachediv exponent --k-grid 0,0.5,1 --alpha-grid 2,3,4 --n-range 30:200:10
    cachediv oracle-compare --n 6 --m 2 --alpha 2 --trials 200 --seed 3
    cachediv theory --n 100 --k 0.5 --alpha 2 --epsilon 0.05
    cachediv validate-theory --n-range 50:200:50 --k 0.5 --alpha 2

Exit status: 0 on success, 1 on a runtime error, 2 on bad flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from cachediv import experiments as ex
from cachediv.oracle import optimality_gap
from cachediv.placement import CacheConfig
from cachediv.scheduler import LinkBudget
from cachediv.theory import DEFAULT_EPSILON, TheoryParams, theory_table

log = logging.getLogger("cachediv")

SWEEP_HEADER = ["n", "m", "k", "alpha", "beta", "noise", "trials", "seed",
                "mean_T", "std_T", "ci95", "mean_t_star"]
EXPONENT_HEADER = ["k", "alpha", "slope_fitted", "slope_predicted", "intercept",
                   "r_squared", "n_min", "n_max", "trials"]
ORACLE_HEADER = ["trial", "n", "m", "T_alg", "T_oracle", "ratio"]
THEORY_HEADER = ["n", "k", "alpha", "epsilon", "m", "t", "exponent",
                 "a_n_exact", "b_n", "a_n_asymptotic", "t_over_4"]
BOUND_HEADER = ["n", "k", "alpha", "epsilon", "mean_T", "ci95", "t_over_4", "below_bound"]

COMMANDS = ("simulate", "sweep", "exponent", "oracle-compare", "theory", "validate-theory")


@dataclass
class RunConfig:
    command: str
    spec: Optional[ex.ExperimentSpec] = None
    n: Optional[int] = None
    k: Optional[float] = None
    m: Optional[int] = None
    alpha: float = 2.0
    k_grid: list = field(default_factory=list)
    alpha_grid: list = field(default_factory=list)
    epsilon: float = DEFAULT_EPSILON
    output: Optional[str] = None
    fmt: str = "csv"
    verbosity: int = 0
    workers: int = 1


def fmt_number(x) -> str:
    """Fixed-point decimal with 9 significant digits; ints stay exact."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return np.format_float_positional(x, precision=9, unique=False, fractional=False, trim="-")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _n_range(text: str) -> list[int]:
    parts = text.split(":")
    try:
        if len(parts) == 3:
            lo, hi, step = (int(p) for p in parts)
        elif len(parts) == 2:
            (lo, hi), step = (int(p) for p in parts), 1
        else:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop[:step], got {text!r}")
    if step < 1 or lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}")
    return list(range(lo, hi + 1, step))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, default=2.0, help="Pareto shape (> 1)")
    common.add_argument("--beta", type=float, default=1.0, help="SINR threshold, linear")
    common.add_argument("--noise", type=float, default=1.0, help="noise power N0, linear")
    common.add_argument("--trials", type=int, default=ex.DEFAULT_TRIALS)
    common.add_argument("--seed", type=int, default=0, help="master seed (unsigned 64-bit)")
    common.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    common.add_argument("-o", "--output", help="write data here instead of stdout")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--workers", type=int, default=1, help="worker processes for trials")
    common.add_argument("--freeze-placement", action="store_true",
                        help="draw one cache placement per point instead of per trial")

    parser = argparse.ArgumentParser(prog="cachediv", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def size_flags(p, need_n):
        p.add_argument("--n", type=int, required=need_n)
        p.add_argument("--k", type=float)
        p.add_argument("--m", type=int)

    size_flags(sub.add_parser("simulate", parents=[common], help="one network size"), True)
    p = sub.add_parser("sweep", parents=[common], help="mean throughput against n")
    p.add_argument("--n-range", type=_n_range, required=True)
    p.add_argument("--k", type=float)
    p.add_argument("--m", type=int)
    p = sub.add_parser("exponent", parents=[common], help="fitted scaling exponents")
    p.add_argument("--n-range", type=_n_range, required=True)
    p.add_argument("--k-grid", type=_float_list, required=True)
    p.add_argument("--alpha-grid", type=_float_list, required=True)
    size_flags(sub.add_parser("oracle-compare", parents=[common], help="scheduler vs brute force"), True)
    p = sub.add_parser("theory", parents=[common], help="closed-form quantities")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=float, required=True)
    p = sub.add_parser("validate-theory", parents=[common], help="mean throughput vs t/4")
    p.add_argument("--n-range", type=_n_range, required=True)
    p.add_argument("--k", type=float, required=True)
    return parser


def parse_args(argv=None) -> RunConfig:
    parser = build_parser()
    a = parser.parse_args(argv)
    cfg = RunConfig(command=a.command, alpha=a.alpha, epsilon=a.epsilon, output=a.output,
                    fmt=a.fmt, verbosity=a.verbose, workers=a.workers)
    if a.workers < 1:
        parser.error("--workers must be >= 1")
    if not a.epsilon > 0:
        parser.error("--epsilon must be > 0")
    try:
        LinkBudget(a.beta, a.noise)
        if a.command == "exponent":
            if not a.k_grid or not a.alpha_grid:
                parser.error("--k-grid and --alpha-grid must be non-empty")
            cfg.k_grid, cfg.alpha_grid = a.k_grid, a.alpha_grid
            for k in a.k_grid:
                for alpha in a.alpha_grid:
                    ex.ExperimentSpec(a.n_range, alpha, k=k, trials=a.trials, master_seed=a.seed)
            cfg.spec = ex.ExperimentSpec(a.n_range, a.alpha_grid[0], k=a.k_grid[0], beta=a.beta,
                                         noise=a.noise, trials=a.trials, master_seed=a.seed,
                                         freeze_placement=a.freeze_placement)
        elif a.command == "theory":
            TheoryParams(a.n, a.k, a.alpha, a.epsilon)
            cfg.n, cfg.k = a.n, a.k
        else:
            n_values = a.n_range if hasattr(a, "n_range") else [a.n]
            cfg.n, cfg.k, cfg.m = getattr(a, "n", None), a.k, getattr(a, "m", None)
            if a.command == "oracle-compare" and cfg.k is None and cfg.m is None:
                parser.error("oracle-compare needs --m or --k")
            if a.k is None and getattr(a, "m", None) is None:
                parser.error(f"{a.command} needs --k or --m")
            cfg.spec = ex.ExperimentSpec(n_values, a.alpha, k=a.k, m=getattr(a, "m", None),
                                         beta=a.beta, noise=a.noise, trials=a.trials,
                                         master_seed=a.seed, freeze_placement=a.freeze_placement)
    except ValueError as err:
        parser.error(str(err))
    return cfg


# output ---------------------------------------------------------------------

def render(header: list, rows: list[dict], fmt: str, summary: Optional[dict] = None) -> str:
    if fmt == "json":
        doc = {"columns": header,
               "rows": [{h: _json_value(r.get(h)) for h in header} for r in rows]}
        if summary is not None:
            doc["summary"] = {k: _json_value(v) for k, v in summary.items()}
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([fmt_number(r.get(h)) for h in header])
    return buf.getvalue()


def _json_value(v):
    if v is None or isinstance(v, str):
        return v
    text = fmt_number(v)
    if text in ("nan", "inf", "-inf"):
        return None
    return int(text) if isinstance(v, (int, np.integer, bool, np.bool_)) else float(text)


def write_atomic(path: str, text: str) -> None:
    """Write via a temp file in the target directory, then rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cachediv-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _point_row(p: ex.AggregatePoint) -> dict:
    return {"n": p.n, "m": p.m, "k": p.k, "alpha": p.alpha, "beta": p.beta, "noise": p.noise,
            "trials": p.trials, "seed": p.seed, "mean_T": p.mean_T, "std_T": p.std_T,
            "ci95": p.ci95, "mean_t_star": p.mean_t_star}


def _estimate_row(e: ex.ScalingEstimate) -> dict:
    return {"k": e.k, "alpha": e.alpha, "slope_fitted": e.slope, "slope_predicted": e.predicted_slope,
            "intercept": e.intercept, "r_squared": e.r_squared, "n_min": e.n_min,
            "n_max": e.n_max, "trials": e.trials}


def _execute(cfg: RunConfig) -> tuple[list, list[dict], Optional[dict], list[str]]:
    spec = cfg.spec
    if cfg.command in ("simulate", "sweep"):
        points = ex.sweep(spec, cfg.workers)
        notes = [f"n={p.n} m={p.m}: mean T = {fmt_number(p.mean_T)} +/- {fmt_number(p.ci95)}"
                 for p in points]
        return SWEEP_HEADER, [_point_row(p) for p in points], None, notes

    if cfg.command == "exponent":
        estimates = ex.exponent_grid(cfg.k_grid, cfg.alpha_grid, spec, cfg.workers)
        notes = [f"k={fmt_number(e.k)} alpha={fmt_number(e.alpha)}: slope {fmt_number(e.slope)}"
                 f" (predicted {fmt_number(e.predicted_slope)}, r2 {fmt_number(e.r_squared)})"
                 for e in estimates]
        return EXPONENT_HEADER, [_estimate_row(e) for e in estimates], None, notes

    if cfg.command == "oracle-compare":
        config = spec.cache_config(cfg.n)
        gap = optimality_gap(spec.trials, config, spec.alpha, spec.budget, spec.master_seed)
        rows = [{"trial": r.trial, "n": r.n, "m": r.m, "T_alg": r.T_alg,
                 "T_oracle": r.T_oracle, "ratio": r.ratio} for r in gap.rows]
        summary = {"mean_oracle_T": gap.mean_oracle_T, "mean_alg_T": gap.mean_alg_T,
                   "mean_ratio": gap.mean_ratio}
        notes = [f"{k} = {fmt_number(v)}" for k, v in summary.items()]
        return ORACLE_HEADER, rows, summary, notes

    if cfg.command == "theory":
        table = theory_table(TheoryParams(cfg.n, cfg.k, cfg.alpha, cfg.epsilon))
        notes = [f"{k} = {fmt_number(v)}" for k, v in table.items()]
        return THEORY_HEADER, [table], None, notes

    if cfg.command == "validate-theory":
        checks = ex.validate_theorem(spec, cfg.epsilon, cfg.workers)
        rows = [{"n": c.n, "k": spec.k, "alpha": spec.alpha, "epsilon": cfg.epsilon,
                 "mean_T": c.mean_T, "ci95": c.ci95, "t_over_4": c.t_over_4,
                 "below_bound": c.below_bound} for c in checks]
        notes = [f"n={c.n}: mean T = {fmt_number(c.mean_T)}, t/4 = {fmt_number(c.t_over_4)}"
                 + (" (below asymptotic bound)" if c.below_bound else "") for c in checks]
        return BOUND_HEADER, rows, None, notes

    raise ValueError(f"unknown command {cfg.command!r}")


def dispatch(cfg: RunConfig) -> int:
    try:
        header, rows, summary, notes = _execute(cfg)
        text = render(header, rows, cfg.fmt, summary)
        if cfg.output:
            write_atomic(cfg.output, text)
            for line in notes:
                print(line)
        else:
            sys.stdout.write(text)
            for line in notes if cfg.command == "oracle-compare" else []:
                print(line, file=sys.stderr)
    except Exception as err:  # noqa: BLE001 - every module error maps to exit 1
        print(f"cachediv {cfg.command}: error: {err}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    cfg = parse_args(argv)
    level = logging.WARNING - 10 * min(cfg.verbosity, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    return dispatch(cfg)


if __name__ == "__main__":
    sys.exit(main())
