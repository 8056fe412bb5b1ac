"""Observation histories on an interval and the gaps they induce."""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True, order=True)
class Observation:
    x: float
    y: float

    def __post_init__(self):
        if not self.x >= 0:
            raise ValueError(f"observation location must be >= 0, got {self.x}")


@dataclass(frozen=True)
class ObservationHistory:
    """Immutable set of observations on ``[a, b]``, sorted by location.

    Both endpoints are always observed. Locations are compared exactly.
    """

    a: float
    b: float
    obs: tuple[Observation, ...]

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"interval requires a < b, got ({self.a}, {self.b})")
        xs = [o.x for o in self.obs]
        if any(x0 >= x1 for x0, x1 in zip(xs, xs[1:])):
            raise ValueError("observations must be strictly ascending in x")
        if not xs or xs[0] != self.a or xs[-1] != self.b:
            raise ValueError("history must contain observations at both endpoints")

    @classmethod
    def from_endpoints(cls, a: float, b: float, ya: float, yb: float) -> ObservationHistory:
        return cls(a, b, (Observation(a, ya), Observation(b, yb)))

    @classmethod
    def from_pairs(cls, a: float, b: float, pairs: Iterable) -> ObservationHistory:
        obs = []
        for x, y in pairs:
            if x < a or x > b:
                raise ValueError(f"observation at x={x} lies outside [{a}, {b}]")
            obs.append(Observation(float(x), float(y)))
        obs.sort(key=lambda o: o.x)
        # set semantics: first value wins at a repeated location
        dedup = []
        for o in obs:
            if dedup and dedup[-1].x == o.x:
                continue
            dedup.append(o)
        return cls(float(a), float(b), tuple(dedup))

    def __len__(self):
        return len(self.obs)

    def __iter__(self):
        return iter(self.obs)

    @property
    def xs(self) -> list[float]:
        return [o.x for o in self.obs]

    def __contains__(self, x) -> bool:
        i = bisect.bisect_left(self.xs, x)
        return i < len(self.obs) and self.obs[i].x == x

    def insert(self, o: Observation) -> ObservationHistory:
        if o.x < self.a or o.x > self.b:
            raise ValueError(f"observation at x={o.x} lies outside [{self.a}, {self.b}]")
        xs = self.xs
        i = bisect.bisect_left(xs, o.x)
        if i < len(xs) and xs[i] == o.x:
            return self
        return ObservationHistory(self.a, self.b, self.obs[:i] + (o,) + self.obs[i:])

    def gaps(self) -> list[tuple[Observation, Observation]]:
        return list(zip(self.obs, self.obs[1:]))

    def translate(self, shift: float) -> ObservationHistory:
        return ObservationHistory(
            self.a + shift,
            self.b + shift,
            tuple(Observation(o.x + shift, o.y) for o in self.obs),
        )

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "obs": [[o.x, o.y] for o in self.obs]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> ObservationHistory:
        return cls(float(d["a"]), float(d["b"]), tuple(Observation(float(x), float(y)) for x, y in d["obs"]))

    @classmethod
    def from_json(cls, text: str) -> ObservationHistory:
        return cls.from_dict(json.loads(text))


def insert(h: ObservationHistory, o: Observation) -> ObservationHistory:
    return h.insert(o)


def gaps(h: ObservationHistory) -> list[tuple[Observation, Observation]]:
    return h.gaps()
