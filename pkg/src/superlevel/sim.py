"""Monte Carlo evaluation of sampling policies."""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _accel, _kernels, _kernels_np
from .history import ObservationHistory
from .policy import FixedBudgetLookahead, OneStepLookahead, Optimal, PolicyKind, run
from .prior import Grid, PriorModel
from .reward import RewardSpec
from .solver import ValueTable, build_table

CSV_COLUMNS = ["c", "optimal_value", "optimal_se", "lookahead_value", "lookahead_se", "ratio"]


@dataclass
class Setup:
    """A problem instance; value tables are built lazily and cached per cost."""

    prior: PriorModel
    grid: Grid
    reward: RewardSpec
    c: float
    h0: ObservationHistory
    _tables: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def symmetric(cls, prior, grid, reward, c) -> Setup:
        """Endpoints of ``grid`` observed at the classification threshold."""
        k = reward.k
        return cls(prior, grid, reward, c, ObservationHistory.from_endpoints(grid.a, grid.b, k, k))

    def table(self, c: float | None = None) -> ValueTable:
        c = self.c if c is None else float(c)
        if c not in self._tables:
            self._tables[c] = build_table(self.prior, self.grid, self.reward, c)
        return self._tables[c]

    def with_cost(self, c: float) -> Setup:
        out = Setup(self.prior, self.grid, self.reward, float(c), self.h0)
        out._tables = self._tables
        return out


@dataclass
class EvalReport:
    policy: str
    replications: int
    mean_performance: float
    std_error: float
    mean_tau: float
    mean_reward: float
    performances: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("performances")
        return d


def _mean_se(x: np.ndarray) -> tuple[float, float]:
    n = len(x)
    mean = math.fsum(x) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((x - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var / n)


def _report(name, rewards, taus, cost) -> EvalReport:
    perf = rewards - cost * taus
    mean, se = _mean_se(perf)
    return EvalReport(
        name, len(perf), mean, se, math.fsum(taus) / len(taus), math.fsum(rewards) / len(rewards), perf
    )


def evaluate(kind: PolicyKind, setup: Setup, reps: int, seed: int, order: str = "tree") -> EvalReport:
    """Mean performance of a policy over ``reps`` independent runs.

    ``order="tree"`` rolls out gaps left to right with the compiled kernels,
    ``order="greedy"`` replays the global greedy decision loop of
    :func:`policy.run`. Both give the same distribution of (reward, tau);
    tree order is what makes large replication counts affordable.
    Runs with the same ``seed`` share random numbers across policies.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if order == "greedy":
        return _evaluate_greedy(kind, setup, reps, seed)
    if order != "tree":
        raise ValueError(f"unknown order {order!r}")
    t = kind.table
    gaps = t.gap_indices(setup.h0, setup.grid)
    g_iL = np.array([g[1] for g in gaps], dtype=np.int64)
    g_iR = np.array([g[2] for g in gaps], dtype=np.int64)
    g_j = np.array([g[3] for g in gaps], dtype=np.int64)
    width = max(1, int(sum(g_j - 1)))
    rng = np.random.default_rng(seed)
    U = rng.random((reps, width))
    extra = rng.random(reps)
    lq = np.ascontiguousarray(t.lq)
    kernels = _kernels if _accel.HAS_NUMBA else _kernels_np
    rewards = np.empty(reps)
    taus = np.zeros(reps, dtype=np.int64)
    if isinstance(kind, FixedBudgetLookahead):
        base = math.floor(kind.T)
        budgets = base + (extra < kind.T - base).astype(np.int64)
        if budgets.max() > width:
            raise ValueError(f"budget T={kind.T} exceeds the {width} unsampled grid points")
        kernels.simulate_budget(t.G, t.GA, t.S, lq, g_iL, g_iR, g_j, budgets, U, rewards)
        taus = budgets
    else:
        if isinstance(kind, Optimal):
            actions = t.A
        else:
            actions = np.where(t.G > kind.c, t.GA, 0).astype(np.int32)
        kernels.simulate_tree(actions, t.S, lq, g_iL, g_iR, g_j, U, rewards, taus)
    return _report(kind.name, rewards, taus.astype(float), kind.cost)


def _evaluate_greedy(kind, setup, reps, seed) -> EvalReport:
    streams = np.random.SeedSequence(seed).spawn(reps)
    rewards = np.empty(reps)
    taus = np.empty(reps)
    for r, ss in enumerate(streams):
        trace = run(kind, setup.h0, setup.grid, np.random.default_rng(ss))
        rewards[r] = trace.final_reward
        taus[r] = trace.tau
    return _report(kind.name, rewards, taus, kind.cost)


@dataclass
class SweepRow:
    c: float
    optimal_value: float
    optimal_se: float
    lookahead_value: float
    lookahead_se: float
    ratio: float
    table_value: float
    ratio_margin_se: float

    def csv_row(self) -> list:
        return [self.c, self.optimal_value, self.optimal_se, self.lookahead_value, self.lookahead_se, self.ratio]


def sweep_cost(setup: Setup, costs, reps: int, seed: int) -> list[SweepRow]:
    """Optimal vs one-step lookahead at each cost, on common random numbers.

    ``ratio_margin_se`` is the standard error of the paired difference
    ``lookahead - 0.98 * optimal``.
    """
    costs = [float(c) for c in costs]
    if any(c <= 0 for c in costs) or costs != sorted(costs):
        raise ValueError("costs must be positive and ascending")
    rows = []
    for c in costs:
        t = setup.table(c)
        opt = evaluate(Optimal(t), setup, reps, seed)
        la = evaluate(OneStepLookahead(c, t), setup, reps, seed)
        _, margin_se = _mean_se(la.performances - 0.98 * opt.performances)
        rows.append(
            SweepRow(
                c,
                opt.mean_performance,
                opt.std_error,
                la.mean_performance,
                la.std_error,
                la.mean_performance / opt.mean_performance,
                t.value(setup.h0, setup.grid),
                margin_se,
            )
        )
    return rows


def write_sweep_csv(rows: list[SweepRow], path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for row in rows:
            w.writerow([repr(v) for v in row.csv_row()])
