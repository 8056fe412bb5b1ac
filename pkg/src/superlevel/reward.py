"""Binary classification rewards and the expected stopping reward of a gap."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .prior import Grid, PriorModel, bridge_pmf_index


@dataclass(frozen=True)
class Indicator:
    """f+(y) = 1{y >= k}, f-(y) = 1{y <= k}."""

    k: float = 0.0
    kind = "indicator"

    @property
    def bound(self) -> float:
        return 1.0

    def class_scores(self, g: Grid) -> tuple[np.ndarray, np.ndarray]:
        # fraction of each y-cell lying above k; the straddling cell splits its mass
        above = np.clip((g.y + 0.5 * g.dy - self.k) / g.dy, 0.0, 1.0)
        return above, 1.0 - above

    def to_dict(self) -> dict:
        return {"reward": "indicator", "k": self.k}


@dataclass(frozen=True)
class ClippedLinear:
    """f+(y) = clip(y - k, -C, C), f- = -f+."""

    k: float = 0.0
    C: float = 1.0
    kind = "clipped"

    def __post_init__(self):
        if not self.C > 0:
            raise ValueError(f"clip bound C must be positive, got {self.C}")

    @property
    def bound(self) -> float:
        return self.C

    def class_scores(self, g: Grid) -> tuple[np.ndarray, np.ndarray]:
        plus = np.clip(g.y - self.k, -self.C, self.C)
        return plus, -plus

    def to_dict(self) -> dict:
        return {"reward": "clipped", "k": self.k, "C": self.C}


RewardSpec = Indicator | ClippedLinear


def reward_from_dict(d: dict) -> RewardSpec:
    if d["reward"] == "indicator":
        return Indicator(float(d["k"]))
    if d["reward"] == "clipped":
        return ClippedLinear(float(d["k"]), float(d["C"]))
    raise ValueError(f"unknown reward {d['reward']!r}")


def pointwise_value(r: RewardSpec, pmf: np.ndarray, g: Grid) -> float:
    """max(E f+(Y), E f-(Y)) under a pmf on the y-grid."""
    plus, minus = r.class_scores(g)
    return max(float(pmf @ plus), float(pmf @ minus))


def endpoint_values(r: RewardSpec, g: Grid) -> np.ndarray:
    """Integrand at an observed grid value (a point mass on its cell)."""
    plus, minus = r.class_scores(g)
    return np.maximum(plus, minus)


def stop_reward_index(r: RewardSpec, p: PriorModel, g: Grid, j: int, iL: int, iR: int) -> float:
    """Trapezoid integral of the pointwise value over a gap of ``j`` x-steps."""
    if j < 1:
        raise ValueError("gap must span at least one x-step")
    ends = endpoint_values(r, g)
    total = 0.5 * (ends[iL] + ends[iR])
    for jl in range(1, j):
        total += pointwise_value(r, bridge_pmf_index(p, g, jl, j - jl, iL, iR), g)
    return g.h * total


def stop_reward(r: RewardSpec, p: PriorModel, g: Grid, dx: float, yL: float, yR: float) -> float:
    return stop_reward_index(r, p, g, g.steps(dx), g.y_index(yL), g.y_index(yR))
