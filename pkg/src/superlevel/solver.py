"""Value tables over two-observation gaps.

A gap is described by its left value index ``iL``, right value index ``iR``
and its length ``j`` in x-steps. Because the priors are translation
invariant, a single table covers every gap of every history on the same
lattice, and the value of a history is the sum of its gap values.
"""

from __future__ import annotations

import hashlib
import json
import logging
import struct
from dataclasses import dataclass, field

import numpy as np

from . import _accel
from . import _kernels, _kernels_np
from .history import ObservationHistory
from .prior import Grid, PriorModel, increment_table, prior_from_dict
from .reward import RewardSpec, endpoint_values, reward_from_dict

logger = logging.getLogger(__name__)

STOP = 0
FORMAT_VERSION = 1
_MAGIC = b"SLVTABLE"


def _kernels_for_backend():
    return _kernels if _accel.HAS_NUMBA else _kernels_np


@dataclass(eq=False)
class ValueTable:
    """Value, action and stop-reward arrays indexed ``[iL, iR, j]``.

    ``A`` holds 0 (stop) or the optimal split offset. ``S`` is the stop
    reward of the gap. ``G``/``GA`` give the best one-step lookahead gain in
    stop reward and where it is attained; both are independent of ``c``.
    """

    prior: PriorModel
    grid: Grid
    reward: RewardSpec
    c: float
    V: np.ndarray = field(repr=False)
    A: np.ndarray = field(repr=False)
    S: np.ndarray = field(repr=False)
    G: np.ndarray = field(repr=False)
    GA: np.ndarray = field(repr=False)

    @property
    def lq(self) -> np.ndarray:
        return increment_table(self.prior, self.grid)

    def gap_indices(self, h: ObservationHistory, grid: Grid | None = None) -> list[tuple[int, int, int, int]]:
        """``(left x-index, iL, iR, j)`` for every gap of ``h``, in the frame of ``grid``."""
        grid = grid or self.grid
        self.check_grid(grid)
        out = []
        for lo, hi in h.gaps():
            jl, jr = grid.x_index(lo.x), grid.x_index(hi.x)
            if jr - jl > self.grid.m:
                raise ValueError(f"gap of {jr - jl} steps exceeds table length {self.grid.m}")
            out.append((jl, grid.y_index(lo.y), grid.y_index(hi.y), jr - jl))
        return out

    def check_grid(self, grid: Grid):
        if not self.grid.same_lattice(grid):
            raise ValueError("table lattice does not match the grid")

    def value(self, h: ObservationHistory, grid: Grid | None = None) -> float:
        return float(sum(self.V[iL, iR, j] for _, iL, iR, j in self.gap_indices(h, grid)))

    def stop_value(self, h: ObservationHistory, grid: Grid | None = None) -> float:
        return float(sum(self.S[iL, iR, j] for _, iL, iR, j in self.gap_indices(h, grid)))

    def meta(self) -> dict:
        return {
            "version": FORMAT_VERSION,
            "prior": self.prior.to_dict(),
            "grid": self.grid.to_dict(),
            "reward": self.reward.to_dict(),
            "c": self.c,
        }

    def checksum(self) -> str:
        digest = hashlib.sha256(json.dumps(self.meta(), sort_keys=True).encode())
        for arr in (self.V, self.A, self.S, self.G, self.GA):
            digest.update(np.ascontiguousarray(arr).tobytes())
        return digest.hexdigest()

    def save(self, path):
        header = json.dumps(self.meta(), sort_keys=True).encode()
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<I", len(header)))
            fh.write(header)
            for arr, dtype in ((self.V, "<f8"), (self.A, "<i4"), (self.S, "<f8"), (self.G, "<f8"), (self.GA, "<i4")):
                fh.write(np.ascontiguousarray(arr, dtype=dtype).tobytes())

    @classmethod
    def load(cls, path) -> ValueTable:
        with open(path, "rb") as fh:
            if fh.read(len(_MAGIC)) != _MAGIC:
                raise ValueError(f"{path} is not a value-table file")
            (size,) = struct.unpack("<I", fh.read(4))
            meta = json.loads(fh.read(size))
            if meta["version"] != FORMAT_VERSION:
                raise ValueError(f"unsupported table version {meta['version']}")
            grid = Grid(**meta["grid"])
            shape = (grid.n, grid.n, grid.m + 1)
            count = int(np.prod(shape))
            arrays = []
            for dtype in ("<f8", "<i4", "<f8", "<f8", "<i4"):
                raw = fh.read(count * np.dtype(dtype).itemsize)
                arrays.append(np.frombuffer(raw, dtype=dtype).reshape(shape).astype(dtype[1:]))
        return cls(prior_from_dict(meta["prior"]), grid, reward_from_dict(meta["reward"]), float(meta["c"]), *arrays)


def build_table(p: PriorModel, g: Grid, r: RewardSpec, c: float) -> ValueTable:
    """Backward recursion over gap length; layer ``j`` depends only on layers ``< j``."""
    if not c > 0:
        raise ValueError("cost must be positive")
    n, m = g.n, g.m
    lq = np.ascontiguousarray(increment_table(p, g))
    plus, minus = (np.ascontiguousarray(v) for v in r.class_scores(g))
    ends = endpoint_values(r, g)
    kernels = _kernels_for_backend()
    if kernels is _kernels:
        # compiled kernel runs layer-major
        V = np.zeros((m + 1, n, n))
        S = np.zeros((m + 1, n, n))
        G = np.full((m + 1, n, n), -np.inf)
        A = np.zeros((m + 1, n, n), dtype=np.int32)
        GA = np.zeros((m + 1, n, n), dtype=np.int32)
        kernels.build_layers(lq, plus, minus, ends, g.h, float(c), V, S, A, G, GA)
        V, S, G, A, GA = (np.ascontiguousarray(np.moveaxis(x, 0, 2)) for x in (V, S, G, A, GA))
    else:
        V = np.zeros((n, n, m + 1))
        S = np.zeros((n, n, m + 1))
        G = np.full((n, n, m + 1), -np.inf)
        A = np.zeros((n, n, m + 1), dtype=np.int32)
        GA = np.zeros((n, n, m + 1), dtype=np.int32)
        kernels.build_layers(lq, plus, minus, ends, g.h, float(c), V, S, A, G, GA)
    logger.debug("built %dx%dx%d table (c=%g, backend=%s)", n, n, m + 1, c, _accel.backend())
    return ValueTable(p, g, r, float(c), V, A, S, G, GA)


def _split_weights(t: ValueTable, iL: int, iR: int, j: int) -> np.ndarray:
    """Bridge pmfs for every interior split, shape ``(j - 1, n)``."""
    lq, n = t.lq, t.grid.n
    i = np.arange(n)
    jl = np.arange(1, j)[:, None]
    logits = lq[jl, i[None, :] - iL + n - 1] + lq[j - jl, iR - i[None, :] + n - 1]
    w = np.exp(logits - logits.max(axis=1, keepdims=True))
    return w / w.sum(axis=1, keepdims=True)


def _check_entry(t: ValueTable, iL: int, iR: int, j: int):
    n, m = t.grid.n, t.grid.m
    if not (0 <= iL < n and 0 <= iR < n and 1 <= j <= m):
        raise IndexError(f"table entry ({iL}, {iR}, {j}) out of range")


def q_values(t: ValueTable, iL: int, iR: int, j: int) -> tuple[np.ndarray, float]:
    """Expected value of sampling at each interior split (net of cost) and the stop reward.

    Element ``s`` of the returned vector is the split at offset ``s + 1``.
    """
    _check_entry(t, iL, iR, j)
    stop = float(t.S[iL, iR, j])
    if j < 2:
        return np.empty(0), stop
    P = _split_weights(t, iL, iR, j)
    jl = np.arange(1, j)
    left = t.V[iL, :, jl]  # [split, i]
    right = t.V[:, iR, j - jl].T  # [split, i]
    return np.einsum("si,si->s", P, left + right) - t.c, stop


def lookahead_gains(t: ValueTable, iL: int, iR: int, j: int) -> tuple[np.ndarray, float]:
    """Expected stop reward after one sample at each interior split, and the current stop reward."""
    _check_entry(t, iL, iR, j)
    stop = float(t.S[iL, iR, j])
    if j < 2:
        return np.empty(0), stop
    P = _split_weights(t, iL, iR, j)
    jl = np.arange(1, j)
    return np.einsum("si,si->s", P, t.S[iL, :, jl] + t.S[:, iR, j - jl].T), stop
