"""Command-line entry point: ``superlevel {solve,trace,compare,budget}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

import numpy as np

from . import _accel
from .budget import sweep_budgets, write_budget_csvs
from .config import ConfigError, load_config
from .history import ObservationHistory
from .policy import Optimal, run
from .sim import sweep_cost, write_sweep_csv
from .solver import ValueTable

EXIT_CONFIG = 2
EXIT_RUNTIME = 3

DEFAULT_COSTS = "0.01,0.02,0.05,0.1,0.2"
DEFAULT_BUDGETS = "1,2,3,4,5,6,7,8,9,10"


def _floats(text: str, flag: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"{flag}: expected comma-separated numbers, got {text!r}") from None


def cmd_solve(args) -> int:
    setup = load_config(args.config).setup()
    t0 = time.perf_counter()
    table = setup.table()
    elapsed = time.perf_counter() - t0
    table.save(args.out)
    print(f"built {setup.grid.n}x{setup.grid.n}x{setup.grid.m + 1} table in {elapsed:.2f}s ({_accel.backend()})")
    print(f"V(H0) = {table.value(setup.h0, setup.grid):.10f}")
    print(f"checksum {table.checksum()}")
    return 0


def cmd_trace(args) -> int:
    table = ValueTable.load(args.table)
    grid = table.grid
    if args.h0:
        h0 = ObservationHistory.from_json(args.h0)
        grid = grid.with_interval(h0.a, h0.b, round((h0.b - h0.a) / grid.h))
    else:
        k = table.reward.k
        h0 = ObservationHistory.from_endpoints(grid.a, grid.b, k, k)
    trace = run(Optimal(table), h0, grid, np.random.default_rng(args.seed), record_curves=True)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        for i, step in enumerate(trace.steps):
            record = {
                "step": i,
                "x": step.x,
                "y": step.y,
                "value": step.value,
                "stop_reward": step.stop_reward,
                "curve": step.curve,
            }
            out.write(json.dumps(record) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    print(f"tau={trace.tau} final_reward={trace.final_reward:.10f} performance={trace.performance:.10f}", file=sys.stderr)
    return 0


def cmd_compare(args) -> int:
    setup = load_config(args.config).setup()
    rows = sweep_cost(setup, _floats(args.costs, "--costs"), args.reps, args.seed)
    write_sweep_csv(rows, args.out)
    for row in rows:
        print(f"c={row.c:g} optimal={row.optimal_value:.5f}+-{row.optimal_se:.5f} "
              f"lookahead={row.lookahead_value:.5f}+-{row.lookahead_se:.5f} ratio={row.ratio:.5f}")
    return 0


def cmd_budget(args) -> int:
    setup = load_config(args.config).setup()
    budgets = _floats(args.budgets, "--budgets")
    if any(T < 0 for T in budgets):
        raise ConfigError("--budgets: budgets must be >= 0")
    results = sweep_budgets(setup, budgets, (args.lambda_lo, args.lambda_hi), args.tol, args.reps, args.seed)
    write_budget_csvs(results, f"{args.out}_v1.csv", f"{args.out}_v2.csv")
    for r in results:
        flag = "  (T may exceed attainable budget)" if r.hit_lower_bound else ""
        print(f"T={r.T:g} lambda*={r.lambda_star:.5g} V1={r.V1:.5f} V2_lower={r.V2_lower:.5f}+-{r.V2_se:.5f}{flag}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superlevel", description=__doc__)
    parser.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="build and save a value table")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("trace", help="run the optimal policy once, JSON lines per sample")
    p.add_argument("--table", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--h0", default=None, help='initial history as JSON {"a":..,"b":..,"obs":[[x,y],..]}')
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("compare", help="optimal vs one-step lookahead over a cost sweep (CSV)")
    p.add_argument("--config", required=True)
    p.add_argument("--costs", default=DEFAULT_COSTS)
    p.add_argument("--reps", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("budget", help="expected-budget value and fixed-budget band (two CSVs)")
    p.add_argument("--config", required=True)
    p.add_argument("--budgets", default=DEFAULT_BUDGETS)
    p.add_argument("--reps", type=int, default=50000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--lambda-lo", type=float, default=1e-4)
    p.add_argument("--lambda-hi", type=float, default=2.0)
    p.add_argument("--out", required=True, help="output prefix; writes <out>_v1.csv and <out>_v2.csv")
    p.set_defaults(func=cmd_budget)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    _accel.set_threads(args.threads)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
