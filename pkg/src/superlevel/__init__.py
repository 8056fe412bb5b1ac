"""Adaptive sampling for the superlevel set of a one-dimensional Markov process."""

from .history import Observation, ObservationHistory
from .prior import BrownianMotion, CompoundPoisson, Grid, bridge_pmf, bridge_sample
from .reward import ClippedLinear, Indicator, pointwise_value, stop_reward
from .solver import ValueTable, build_table, q_values
from .policy import FixedBudgetLookahead, OneStepLookahead, Optimal, decide, run
from .sim import EvalReport, Setup, evaluate, sweep_cost
from .budget import BudgetResult, dual_value, solve_v1, sweep_budgets
from .oracle import brute_value

__version__ = "0.1.0"

__all__ = [
    "Observation",
    "ObservationHistory",
    "BrownianMotion",
    "CompoundPoisson",
    "Grid",
    "bridge_pmf",
    "bridge_sample",
    "Indicator",
    "ClippedLinear",
    "pointwise_value",
    "stop_reward",
    "ValueTable",
    "build_table",
    "q_values",
    "Optimal",
    "OneStepLookahead",
    "FixedBudgetLookahead",
    "decide",
    "run",
    "Setup",
    "EvalReport",
    "evaluate",
    "sweep_cost",
    "BudgetResult",
    "dual_value",
    "solve_v1",
    "sweep_budgets",
    "brute_value",
]
