"""Translation-invariant Markov priors and their discretized bridge laws.

Every conditional law in the package is built from one primitive: the
log-mass of the process increment over a length ``t`` landing in the
``y``-grid cell at offset ``u``. The law of ``Y`` at an interior point given
the two flanking observations is then proportional to

    increment(dxL, y' - yL) * increment(dxR, yR - y')

on the grid. For Brownian motion this is exactly the midpoint
discretization of the Brownian-bridge normal; for the compound Poisson
process it is the jump-count mixture conditioned on the cell of the total
increment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import stats
from scipy.special import logsumexp

_POISSON_TAIL = 1e-10
_ALIGN_TOL = 1e-9


@dataclass(frozen=True)
class BrownianMotion:
    kind = "brownian"

    def sd(self, t: float) -> float:
        return math.sqrt(t)

    def log_increment(self, t: float, u: np.ndarray, dy: float) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return -0.5 * u * u / t - 0.5 * math.log(2 * math.pi * t) + math.log(dy)

    def to_dict(self) -> dict:
        return {"prior": "brownian"}


@dataclass(frozen=True)
class CompoundPoisson:
    """Poisson(mu) jump counts per unit length with standard normal jumps."""

    mu: float
    kind = "cpp"

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"jump rate mu must be positive, got {self.mu}")

    def sd(self, t: float) -> float:
        return math.sqrt(self.mu * t)

    def max_jumps(self, t: float) -> int:
        """Smallest N with P(Poisson(mu t) > N) < 1e-10, at least 1."""
        lam = self.mu * t
        n = int(stats.poisson.isf(_POISSON_TAIL, lam))
        while stats.poisson.sf(n, lam) >= _POISSON_TAIL:
            n += 1
        return max(n, 1)

    def log_increment(self, t: float, u: np.ndarray, dy: float) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        lam = self.mu * t
        counts = np.arange(1, self.max_jumps(t) + 1, dtype=float)
        log_pois = stats.poisson.logpmf(counts, lam)
        terms = (
            log_pois[:, None]
            - 0.5 * u[None, :] ** 2 / counts[:, None]
            - 0.5 * np.log(2 * math.pi * counts)[:, None]
            + math.log(dy)
        )
        # zero jumps: an atom of mass exp(-lam) in the cell holding 0
        atom = np.where(np.abs(u) < 0.5 * dy, -lam, -np.inf)
        return logsumexp(np.vstack([terms, atom[None, :]]), axis=0)

    def to_dict(self) -> dict:
        return {"prior": "cpp", "mu": self.mu}


PriorModel = BrownianMotion | CompoundPoisson


def prior_from_dict(d: dict) -> PriorModel:
    if d["prior"] == "brownian":
        return BrownianMotion()
    if d["prior"] == "cpp":
        return CompoundPoisson(float(d["mu"]))
    raise ValueError(f"unknown prior {d['prior']!r}")


@dataclass(frozen=True)
class Grid:
    """Uniform x-grid on ``[a, b]`` with ``m`` steps and ``n`` y-values.

    ``y_i = center + (i - (n - 1) / 2) * dy`` so the grid is exactly
    symmetric about ``center``.
    """

    a: float
    b: float
    m: int
    n: int
    center: float
    dy: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"grid interval requires a < b, got ({self.a}, {self.b})")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.n < 3:
            raise ValueError(f"n must be >= 3, got {self.n}")
        if not self.dy > 0:
            raise ValueError(f"dy must be positive, got {self.dy}")

    @classmethod
    def make(cls, a, b, m, n, center=0.0, halfwidth=None, prior: PriorModel | None = None) -> Grid:
        """Grid spanning ``center +- halfwidth``; default halfwidth is 6 process sd over ``[a, b]``."""
        if halfwidth is None:
            if prior is None:
                raise ValueError("need a halfwidth or a prior to size the y-grid")
            halfwidth = 6.0 * prior.sd(b - a)
        if n < 3:
            raise ValueError(f"n must be >= 3, got {n}")
        return cls(float(a), float(b), int(m), int(n), float(center), 2.0 * halfwidth / (n - 1))

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.m

    @property
    def y(self) -> np.ndarray:
        return self.center + (np.arange(self.n) - (self.n - 1) / 2) * self.dy

    def x_of(self, j: int) -> float:
        return self.a + j * (self.b - self.a) / self.m

    def y_of(self, i: int) -> float:
        return self.center + (i - (self.n - 1) / 2) * self.dy

    def x_index(self, x: float) -> int:
        j = round((x - self.a) / self.h)
        if abs(x - self.x_of(j)) > _ALIGN_TOL * self.h:
            raise ValueError(f"location {x} is not on the x-grid (h={self.h})")
        return j

    def y_index(self, y: float) -> int:
        i = round((y - self.center) / self.dy + (self.n - 1) / 2)
        if not 0 <= i < self.n or abs(y - self.y_of(i)) > _ALIGN_TOL * self.dy:
            raise ValueError(f"value {y} is not on the y-grid")
        return i

    def steps(self, dx: float) -> int:
        """Number of x-steps in a length; rejects lengths that are not positive multiples of h."""
        j = round(dx / self.h)
        if j < 1 or abs(dx - j * self.h) > _ALIGN_TOL * self.h:
            raise ValueError(f"length {dx} is not a positive multiple of h={self.h}")
        return j

    def translate(self, shift: float) -> Grid:
        return Grid(self.a + shift, self.b + shift, self.m, self.n, self.center, self.dy)

    def with_interval(self, a: float, b: float, m: int) -> Grid:
        return Grid(float(a), float(b), int(m), self.n, self.center, self.dy)

    def same_lattice(self, other: Grid) -> bool:
        """True when both grids share x-step and y-grid (absolute position may differ)."""
        return (
            self.n == other.n
            and self.center == other.center
            and self.dy == other.dy
            and math.isclose(self.h, other.h, rel_tol=1e-12)
        )

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "m": self.m, "n": self.n, "center": self.center, "dy": self.dy}


def increment_row(p: PriorModel, t: float, g: Grid) -> np.ndarray:
    """Log-mass of the increment over length ``t`` at offsets ``-(n-1)..(n-1)`` cells."""
    offsets = np.arange(-(g.n - 1), g.n) * g.dy
    return p.log_increment(t, offsets, g.dy)


@lru_cache(maxsize=64)
def increment_table(p: PriorModel, g: Grid) -> np.ndarray:
    """Rows ``j = 0..m`` of :func:`increment_row` for lengths ``j * h``; row 0 is unused."""
    table = np.zeros((g.m + 1, 2 * g.n - 1))
    for j in range(1, g.m + 1):
        table[j] = increment_row(p, j * g.h, g)
    table.setflags(write=False)
    return table


def bridge_logits(row_left: np.ndarray, row_right: np.ndarray, iL: int, iR: int) -> np.ndarray:
    n = (row_left.shape[0] + 1) // 2
    i = np.arange(n)
    return row_left[i - iL + n - 1] + row_right[iR - i + n - 1]


def _softmax(logits: np.ndarray) -> np.ndarray:
    w = np.exp(logits - logits.max())
    return w / w.sum()


def bridge_pmf_index(p: PriorModel, g: Grid, jL: int, jR: int, iL: int, iR: int) -> np.ndarray:
    """Bridge pmf in grid coordinates: lengths in x-steps, values as y-indices."""
    if jL < 1 or jR < 1:
        raise ValueError("bridge lengths must be at least one x-step")
    if not (0 <= iL < g.n and 0 <= iR < g.n):
        raise ValueError("bridge endpoint values must be y-grid indices")
    if jL <= g.m and jR <= g.m:
        table = increment_table(p, g)
        left, right = table[jL], table[jR]
    else:
        left, right = increment_row(p, jL * g.h, g), increment_row(p, jR * g.h, g)
    return _softmax(bridge_logits(left, right, iL, iR))


def bridge_pmf(p: PriorModel, g: Grid, dxL: float, dxR: float, yL: float, yR: float) -> np.ndarray:
    """Probability vector over ``g.y`` for the value ``dxL`` right of ``yL`` given ``yR`` at ``dxL + dxR``."""
    return bridge_pmf_index(p, g, g.steps(dxL), g.steps(dxR), g.y_index(yL), g.y_index(yR))


def bridge_sample(p: PriorModel, g: Grid, dxL, dxR, yL, yR, rng: np.random.Generator) -> float:
    pmf = bridge_pmf(p, g, dxL, dxR, yL, yR)
    return g.y_of(sample_index(pmf, rng.random()))


def sample_index(pmf: np.ndarray, u: float) -> int:
    """Inverse-CDF draw of an index from ``pmf`` given a uniform ``u``."""
    cdf = np.cumsum(pmf)
    i = int(np.searchsorted(cdf, u * cdf[-1], side="right"))
    return min(i, len(pmf) - 1)
