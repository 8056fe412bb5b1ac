"""Flat ``key = value`` run configuration."""

from __future__ import annotations

import configparser
from dataclasses import dataclass

from .history import ObservationHistory
from .prior import BrownianMotion, CompoundPoisson, Grid
from .reward import ClippedLinear, Indicator
from .sim import Setup

DEFAULTS = {
    "prior": "brownian",
    "mu": "20",
    "a": "0",
    "b": "1",
    "m": "100",
    "n": "81",
    "reward": "indicator",
    "k": "0",
    "C": "1",
    "c": "0.05",
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    values: dict

    def _float(self, key):
        try:
            return float(self.values[key])
        except ValueError:
            raise ConfigError(f"{key}: expected a number, got {self.values[key]!r}") from None

    def _int(self, key):
        try:
            return int(self.values[key])
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {self.values[key]!r}") from None

    def setup(self) -> Setup:
        v = self.values
        if v["prior"] == "brownian":
            prior = BrownianMotion()
        elif v["prior"] == "cpp":
            mu = self._float("mu")
            if not mu > 0:
                raise ConfigError("mu: jump rate must be positive")
            prior = CompoundPoisson(mu)
        else:
            raise ConfigError(f"prior: unknown prior {v['prior']!r} (expected brownian or cpp)")
        a, b = self._float("a"), self._float("b")
        if not 0 <= a < b:
            raise ConfigError("a, b: interval must satisfy 0 <= a < b")
        m, n = self._int("m"), self._int("n")
        if m < 1:
            raise ConfigError("m: must be >= 1")
        if n < 3:
            raise ConfigError("n: must be >= 3")
        k = self._float("k")
        if v["reward"] == "indicator":
            reward = Indicator(k)
        elif v["reward"] == "clipped":
            C = self._float("C")
            if not C > 0:
                raise ConfigError("C: clip bound must be positive")
            reward = ClippedLinear(k, C)
        else:
            raise ConfigError(f"reward: unknown reward {v['reward']!r} (expected indicator or clipped)")
        c = self._float("c")
        if not c > 0:
            raise ConfigError("cost must be positive")
        halfwidth = self._float("yrange") if "yrange" in v else None
        if halfwidth is not None and not halfwidth > 0:
            raise ConfigError("yrange: must be positive")
        grid = Grid.make(a, b, m, n, center=k, halfwidth=halfwidth, prior=prior)
        ya = self._float("ya") if "ya" in v else k
        yb = self._float("yb") if "yb" in v else k
        try:
            h0 = ObservationHistory.from_endpoints(grid.a, grid.b, grid.y_of(grid.y_index(ya)), grid.y_of(grid.y_index(yb)))
        except ValueError as exc:
            raise ConfigError(f"ya, yb: {exc}") from None
        return Setup(prior, grid, reward, c, h0)


def parse_config(text: str) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    parser.optionxform = str
    try:
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    values = dict(DEFAULTS)
    values.update({key: val.strip() for key, val in parser["run"].items()})
    return RunConfig(values)


def load_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
