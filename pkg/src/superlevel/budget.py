"""Expected-budget-constrained values from the cost-per-sample tables.

For a sample budget ``T`` the constrained value is bounded (and under mild
conditions equalled) by ``min over lam of V(H0, lam) + lam * T``. The
objective is convex in ``lam``, so a golden-section search on the bracket
finds it without derivatives; ``V`` is piecewise linear in ``lam`` and its
derivative is useless anyway.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field

from .policy import FixedBudgetLookahead
from .sim import Setup, evaluate

logger = logging.getLogger(__name__)

_INV_PHI = (math.sqrt(5) - 1) / 2


class DualFunction:
    """``lam -> V(H0, lam)`` with tables cached on ``lam`` rounded to ``tol / 10``."""

    def __init__(self, setup: Setup, tol: float = 1e-3):
        self.setup = setup
        self.quantum = tol / 10
        self.values: dict[float, float] = {}

    def key(self, lam: float) -> float:
        return round(lam / self.quantum) * self.quantum if lam > self.quantum else lam

    def value(self, lam: float) -> float:
        if not lam > 0:
            raise ValueError("lambda must be positive")
        lam = self.key(lam)
        if lam not in self.values:
            table = self.setup.table(lam)
            self.values[lam] = table.value(self.setup.h0, self.setup.grid)
            # keep memory flat: only the value is needed later
            self.setup._tables.pop(float(lam), None)
        return self.values[lam]

    def __call__(self, lam: float, T: float) -> float:
        return self.value(lam) + self.key(lam) * T

    def best(self, T: float) -> tuple[float, float]:
        """Smallest dual value over every lambda evaluated so far."""
        return min(((v + lam * T, lam) for lam, v in self.values.items()), key=lambda p: (p[0], p[1]))


def dual_value(setup: Setup, T: float, lam: float, dual: DualFunction | None = None) -> float:
    if not lam > 0:
        raise ValueError("lambda must be positive")
    if T < 0:
        raise ValueError("budget must be >= 0")
    dual = dual or DualFunction(setup)
    return dual(lam, T)


@dataclass
class BudgetResult:
    T: float
    lambda_star: float
    V1: float
    V2_lower: float
    V2_se: float
    hit_lower_bound: bool = False
    evaluations: list = field(default_factory=list, repr=False)

    @property
    def V2_upper(self) -> float:
        return self.V1


def _golden_section(f, lo: float, hi: float, tol: float) -> None:
    """Shrink ``[lo, hi]`` around the minimizer of a unimodal ``f``; searches in log-lambda."""
    a, b = math.log(lo), math.log(hi)
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(math.exp(x1)), f(math.exp(x2))
    while math.exp(b) - math.exp(a) >= tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(math.exp(x1))
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(math.exp(x2))


def solve_v1(
    setup: Setup,
    T: float,
    lambda_bracket: tuple[float, float] = (1e-4, 2.0),
    tol: float = 1e-3,
    reps: int = 50000,
    seed: int = 0,
    dual: DualFunction | None = None,
    lower_bound: bool = True,
) -> BudgetResult:
    """Minimize the dual over the bracket and estimate the fixed-budget lower bound.

    The lower bound runs the one-step lookahead policy for exactly ``T``
    samples; fractional ``T`` is randomized between its floor and ceiling.
    """
    lo, hi = lambda_bracket
    cap = 2 * setup.reward.bound * (setup.grid.b - setup.grid.a)
    if not 0 < lo < hi <= cap:
        raise ValueError(f"lambda bracket must satisfy 0 < lo < hi <= {cap}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if T < 0:
        raise ValueError("budget must be >= 0")
    dual = dual or DualFunction(setup, tol)
    dual(lo, T)
    dual(hi, T)
    _golden_section(lambda lam: dual(lam, T), lo, hi, tol)
    V1, lam_star = dual.best(T)
    hit = lam_star <= dual.key(lo) * (1 + 1e-12)
    if hit:
        logger.warning("dual minimizer at the lower bracket end for T=%g; T may exceed the attainable budget", T)
    V2, se = math.nan, math.nan
    if lower_bound:
        table = setup.table(lam_star)
        report = evaluate(FixedBudgetLookahead(T, table), setup, reps, seed)
        V2, se = report.mean_performance, report.std_error
    return BudgetResult(T, lam_star, V1, V2, se, hit, sorted(dual.values.items()))


def sweep_budgets(setup: Setup, budgets, lambda_bracket=(1e-4, 2.0), tol=1e-3, reps=50000, seed=0) -> list[BudgetResult]:
    """``solve_v1`` for each budget, then re-minimize every budget over all lambdas seen.

    Sharing the evaluated lambdas makes the returned upper bound a minimum of
    the same finite family of lines for every ``T``, hence non-decreasing and
    concave in ``T``.
    """
    dual = DualFunction(setup, tol)
    results = [solve_v1(setup, T, lambda_bracket, tol, reps, seed, dual=dual) for T in budgets]
    for res in results:
        res.V1, res.lambda_star = dual.best(res.T)
        res.evaluations = sorted(dual.values.items())
    return results


def write_budget_csvs(results: list[BudgetResult], v1_path, v2_path):
    with open(v1_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["T", "lambda_star", "V1"])
        for r in results:
            w.writerow([r.T, r.lambda_star, r.V1])
    with open(v2_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["T", "V2_lower", "se", "V2_upper"])
        for r in results:
            w.writerow([r.T, r.V2_lower, r.V2_se, r.V2_upper])
