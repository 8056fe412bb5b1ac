"""Exhaustive dynamic program over whole histories, for tiny grids only.

This deliberately ignores the gap decomposition: the state is the full set
of observations, and every unsampled grid point is a candidate at every
step. It shares the bridge pmf and stop-reward quadrature with the rest of
the package but none of the table code, so agreement with
:func:`solver.build_table` is a genuine check of the decomposition.

The recursion is keyed on the interior observations only and carries the
value for every pair of endpoint values at once as an ``(n, n)`` array;
the endpoint pair is still part of the state, it is just vectorized.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .history import ObservationHistory
from .prior import Grid, PriorModel, bridge_pmf_index
from .reward import RewardSpec, stop_reward_index

MAX_FREE_POINTS = 8

_FREE = -1


class BruteForce:
    def __init__(self, p: PriorModel, g: Grid, r: RewardSpec, c: float):
        if not c > 0:
            raise ValueError("cost must be positive")
        if g.m - 1 > MAX_FREE_POINTS:
            raise ValueError(f"grid too large for brute force: {g.m - 1} interior points > {MAX_FREE_POINTS}")
        self.p, self.g, self.r, self.c = p, g, r, c
        self._memo: dict[tuple, np.ndarray] = {}
        n = g.n
        # stop reward of a gap of j steps, all endpoint values: [j][iL, iR]
        self._S = np.zeros((g.m + 1, n, n))
        for j in range(1, g.m + 1):
            for iL in range(n):
                for iR in range(n):
                    self._S[j, iL, iR] = stop_reward_index(r, p, g, j, iL, iR)

    @lru_cache(maxsize=None)
    def _pmf(self, jl: int, jr: int) -> np.ndarray:
        """Bridge pmfs ``[iL, iR, y]`` for an interior point ``jl`` and ``jr`` steps from its flanks."""
        n = self.g.n
        out = np.empty((n, n, n))
        for iL in range(n):
            for iR in range(n):
                out[iL, iR] = bridge_pmf_index(self.p, self.g, jl, jr, iL, iR)
        return out

    def _points(self, interior: tuple) -> list[tuple[int, int]]:
        return [(x + 1, y) for x, y in enumerate(interior) if y != _FREE]

    def reward_all(self, interior: tuple) -> np.ndarray:
        """Stop reward of the full history for every endpoint pair, ``[iL, iR]``."""
        m, S = self.g.m, self._S
        pts = self._points(interior)
        if not pts:
            return S[m].copy()
        (x0, y0), (xk, yk) = pts[0], pts[-1]
        middle = sum(S[x1 - xa, ya, y1] for (xa, ya), (x1, y1) in zip(pts, pts[1:]))
        return S[x0, :, y0][:, None] + middle + S[m - xk, yk, :][None, :]

    def _bridge(self, pts, x: int) -> np.ndarray:
        """pmf of Y(x) given its flanking observations, broadcast to ``[iL, iR, y]``."""
        left = max((p for p in pts if p[0] < x), default=None)
        right = min((p for p in pts if p[0] > x), default=None)
        xl = left[0] if left else 0
        xr = right[0] if right else self.g.m
        P = self._pmf(x - xl, xr - x)
        iL = slice(None) if left is None else slice(left[1], left[1] + 1)
        iR = slice(None) if right is None else slice(right[1], right[1] + 1)
        return P[iL, iR, :]

    def value_all(self, interior: tuple) -> np.ndarray:
        """Value of the full history for every endpoint pair, ``[iL, iR]``."""
        hit = self._memo.get(interior)
        if hit is not None:
            return hit
        best = self.reward_all(interior)
        pts = self._points(interior)
        for pos, y in enumerate(interior):
            if y != _FREE:
                continue
            P = self._bridge(pts, pos + 1)
            ev = np.zeros_like(best)
            for yv in range(self.g.n):
                child = interior[:pos] + (yv,) + interior[pos + 1 :]
                ev += P[:, :, yv] * self.value_all(child)
            best = np.maximum(best, ev - self.c)
        self._memo[interior] = best
        return best

    def state_of(self, h: ObservationHistory) -> tuple[tuple, int, int]:
        if h.a != self.g.a or h.b != self.g.b:
            raise ValueError("history interval must match the oracle grid")
        interior = [_FREE] * (self.g.m - 1)
        for o in h.obs[1:-1]:
            interior[self.g.x_index(o.x) - 1] = self.g.y_index(o.y)
        return tuple(interior), self.g.y_index(h.obs[0].y), self.g.y_index(h.obs[-1].y)

    def reward(self, h: ObservationHistory) -> float:
        interior, iL, iR = self.state_of(h)
        return float(self.reward_all(interior)[iL, iR])

    def value(self, h: ObservationHistory) -> float:
        interior, iL, iR = self.state_of(h)
        return float(self.value_all(interior)[iL, iR])


def brute_value(p: PriorModel, g: Grid, r: RewardSpec, c: float, h: ObservationHistory) -> float:
    return BruteForce(p, g, r, c).value(h)
