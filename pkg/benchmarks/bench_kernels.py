#!/usr/bin/env python3
"""Compare the numba kernels against the pure-numpy fallback.

Each backend runs in its own interpreter because the switch is read at
import time. Timings are best-of-``--repeat`` after one warm-up call, so
numba compilation is excluded.

    python3 benchmarks/bench_kernels.py --m 40 --n 41 --reps 2000
"""

import argparse
import json
import os
import subprocess
import sys
import time


def best_of(fn, repeat):
    fn()  # warm-up / JIT compile
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def worker(args):
    from superlevel import _accel
    from superlevel.policy import FixedBudgetLookahead, OneStepLookahead, Optimal
    from superlevel.prior import BrownianMotion, Grid
    from superlevel.reward import Indicator
    from superlevel.sim import Setup, evaluate
    from superlevel.solver import build_table

    p = BrownianMotion()
    g = Grid.make(0, 1, args.m, args.n, prior=p)
    setup = Setup.symmetric(p, g, Indicator(0), 0.02)
    table = build_table(p, g, Indicator(0), 0.02)
    out = {
        "backend": _accel.backend(),
        "build_table": best_of(lambda: build_table(p, g, Indicator(0), 0.02), args.repeat),
        "rollout_optimal": best_of(lambda: evaluate(Optimal(table), setup, args.reps, 0), args.repeat),
        "rollout_lookahead": best_of(lambda: evaluate(OneStepLookahead(0.02, table), setup, args.reps, 0), args.repeat),
        "rollout_budget": best_of(lambda: evaluate(FixedBudgetLookahead(5, table), setup, args.reps, 0), args.repeat),
        "value": table.value(setup.h0),
    }
    print(json.dumps(out))


def run_backend(args, numpy_only):
    env = dict(os.environ)
    env.pop("SUPERLEVEL_NO_NUMBA", None)
    if numpy_only:
        env["SUPERLEVEL_NO_NUMBA"] = "1"
    cmd = [sys.executable, __file__, "--worker", "--m", str(args.m), "--n", str(args.n),
           "--reps", str(args.reps), "--repeat", str(args.repeat)]
    proc = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=40)
    ap.add_argument("--n", type=int, default=41)
    ap.add_argument("--reps", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.worker:
        worker(args)
        return

    fast = run_backend(args, numpy_only=False)
    slow = run_backend(args, numpy_only=True)
    print(f"grid m={args.m} n={args.n}, {args.reps} rollouts, best of {args.repeat}")
    print(f"{'kernel':<20}{slow['backend']:>12}{fast['backend']:>12}{'speedup':>10}")
    for key in ("build_table", "rollout_optimal", "rollout_lookahead", "rollout_budget"):
        print(f"{key:<20}{slow[key]:>11.4f}s{fast[key]:>11.4f}s{slow[key] / fast[key]:>9.1f}x")
    print(f"V(H0) numpy={slow['value']:.12f} numba={fast['value']:.12f}")


if __name__ == "__main__":
    main()
