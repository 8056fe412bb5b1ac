import numpy as np
import pytest

from superlevel import solver
from superlevel.prior import BrownianMotion, CompoundPoisson, Grid
from superlevel.reward import ClippedLinear, Indicator
from superlevel.sim import Setup


@pytest.fixture(scope="session")
def bm():
    return BrownianMotion()


@pytest.fixture(scope="session")
def cpp():
    return CompoundPoisson(20.0)


@pytest.fixture(scope="session")
def small_grid(bm):
    return Grid.make(0, 1, 20, 21, prior=bm)


@pytest.fixture(scope="session")
def small_table(bm, small_grid):
    return solver.build_table(bm, small_grid, Indicator(0.0), 0.05)


@pytest.fixture(scope="session")
def clipped_table(bm, small_grid):
    return solver.build_table(bm, small_grid, ClippedLinear(0.0, 1.0), 0.05)


@pytest.fixture(scope="session")
def cpp_grid(cpp):
    return Grid.make(0, 1, 20, 21, prior=cpp)


@pytest.fixture(scope="session")
def cpp_table(cpp, cpp_grid):
    return solver.build_table(cpp, cpp_grid, Indicator(0.0), 0.05)


@pytest.fixture()
def small_setup(bm, small_grid):
    return Setup.symmetric(bm, small_grid, Indicator(0.0), 0.05)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)



_VERDICTS: list[str] = []


class Criterion:
    """Records one pass/fail line per acceptance criterion, even when the body raises."""

    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.ok = False
        self.detail = ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None:
            self.ok = False
            self.detail = self.detail or f"{exc_type.__name__}: {exc}"
        line = f"criterion {self.number} [{self.title}]: {'PASS' if self.ok else 'FAIL'}  {self.detail}"
        _VERDICTS.append(line)
        print(line)
        return False


@pytest.fixture()
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
