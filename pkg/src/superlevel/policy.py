"""Sampling policies driven by value and stop-reward tables."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .history import Observation, ObservationHistory
from .prior import Grid, bridge_pmf_index, sample_index
from .solver import ValueTable, lookahead_gains, q_values


@dataclass(frozen=True)
class Optimal:
    table: ValueTable

    @property
    def cost(self) -> float:
        return self.table.c

    name = "optimal"


@dataclass(frozen=True)
class OneStepLookahead:
    """Sample where the expected stop reward gains most; stop once the gain is below ``c``.

    ``table`` supplies stop rewards only, so its own cost is irrelevant.
    """

    c: float
    table: ValueTable

    @property
    def cost(self) -> float:
        return self.c

    name = "lookahead"


@dataclass(frozen=True)
class FixedBudgetLookahead:
    """One-step lookahead that always takes exactly ``T`` samples, cost-free."""

    T: int
    table: ValueTable

    def __post_init__(self):
        if self.T < 0:
            raise ValueError(f"sample budget must be >= 0, got {self.T}")

    @property
    def cost(self) -> float:
        return 0.0

    name = "fixed_budget"


PolicyKind = Optimal | OneStepLookahead | FixedBudgetLookahead


@dataclass
class TraceStep:
    x: float
    y: float
    value: float
    stop_reward: float
    curve: list = field(default_factory=list, repr=False)


@dataclass
class PolicyTrace:
    steps: list[TraceStep]
    final_reward: float
    cost: float
    history: ObservationHistory = field(repr=False)

    @property
    def tau(self) -> int:
        return len(self.steps)

    @property
    def performance(self) -> float:
        return self.final_reward - self.cost * self.tau


def improvements(kind: PolicyKind, h: ObservationHistory, grid: Grid) -> list[tuple[float, int, float, float]]:
    """``(x, x-index, improvement, stop reward of the gap)`` for every unsampled grid point."""
    t = kind.table
    out = []
    for jl, iL, iR, j in t.gap_indices(h, grid):
        if isinstance(kind, Optimal):
            q, stop = q_values(t, iL, iR, j)
            gain = q - stop
        else:
            q, stop = lookahead_gains(t, iL, iR, j)
            gain = q - stop
            if isinstance(kind, OneStepLookahead):
                gain = gain - kind.c
        for s, g in enumerate(gain):
            out.append((grid.x_of(jl + s + 1), jl + s + 1, float(g), stop))
    return out


def decide(kind: PolicyKind, h: ObservationHistory, grid: Grid, taken: int = 0) -> float | None:
    """Next location to sample, or ``None`` to stop.

    ``taken`` counts samples already spent; only the fixed-budget policy uses it.
    """
    if isinstance(kind, FixedBudgetLookahead) and taken >= kind.T:
        return None
    best_x, best = None, -np.inf
    for x, _, g, _ in improvements(kind, h, grid):
        if g > best:
            best_x, best = x, g
    if best_x is None:
        return None
    if isinstance(kind, FixedBudgetLookahead) or best > 0:
        return best_x
    return None


def _sample_in_gap(kind: PolicyKind, h: ObservationHistory, grid: Grid, x: float, u: float) -> float:
    """Draw Y(x) from the bridge between the observations flanking ``x``."""
    t = kind.table
    xs = h.xs
    k = int(np.searchsorted(xs, x))
    lo, hi = h.obs[k - 1], h.obs[k]
    jx, jlo, jhi = grid.x_index(x), grid.x_index(lo.x), grid.x_index(hi.x)
    pmf = bridge_pmf_index(t.prior, t.grid, jx - jlo, jhi - jx, grid.y_index(lo.y), grid.y_index(hi.y))
    return grid.y_of(sample_index(pmf, u))


def run(
    kind: PolicyKind,
    h0: ObservationHistory,
    grid: Grid,
    rng: np.random.Generator,
    record_curves: bool = False,
) -> PolicyTrace:
    """Execute a policy from ``h0`` until it stops, drawing observations from the prior."""
    t = kind.table
    if isinstance(kind, FixedBudgetLookahead):
        free = sum(j - 1 for _, _, _, j in t.gap_indices(h0, grid))
        if kind.T > free:
            raise ValueError(f"budget T={kind.T} exceeds the {free} unsampled grid points")
    h = h0
    steps = []
    while True:
        x = decide(kind, h, grid, taken=len(steps))
        if x is None:
            break
        if x in h:
            raise RuntimeError(f"policy proposed already-sampled location {x}")
        curve = []
        if record_curves:
            curve = [[cx, g + stop, stop] for cx, _, g, stop in improvements(kind, h, grid)]
        value = t.value(h, grid) if isinstance(kind, Optimal) else t.stop_value(h, grid)
        stop = t.stop_value(h, grid)
        y = _sample_in_gap(kind, h, grid, x, rng.random())
        steps.append(TraceStep(x, y, value, stop, curve))
        h = h.insert(Observation(x, y))
    return PolicyTrace(steps, t.stop_value(h, grid), kind.cost, h)
