from functools import lru_cache

import numpy as np
import pytest

from superlevel import solver
from superlevel.history import Observation, ObservationHistory
from superlevel.policy import FixedBudgetLookahead, OneStepLookahead, Optimal, decide, improvements, run
from superlevel.prior import BrownianMotion, Grid, bridge_pmf_index
from superlevel.reward import Indicator, stop_reward_index
from superlevel.sim import Setup, evaluate


def endpoints(g, ya=0.0, yb=0.0):
    return ObservationHistory.from_endpoints(g.a, g.b, ya, yb)


@pytest.fixture(scope="module")
def mid_table():
    p = BrownianMotion()
    return solver.build_table(p, Grid.make(0, 1, 50, 41, prior=p), Indicator(0), 0.05)


@pytest.fixture(scope="module")
def cheap_table(bm, small_grid):
    return solver.build_table(bm, small_grid, Indicator(0), 0.01)


def test_optimal_first_sample_midpoint(mid_table):
    assert decide(Optimal(mid_table), endpoints(mid_table.grid), mid_table.grid) == 0.5


def test_expensive_cost_stops_everywhere(bm, small_grid):
    t = solver.build_table(bm, small_grid, Indicator(0), 2.0)
    rng = np.random.default_rng(0)
    for _ in range(10):
        h = ObservationHistory.from_pairs(0, 1, [(0, small_grid.y_of(int(rng.integers(21)))), (small_grid.x_of(int(rng.integers(1, 20))), small_grid.y_of(int(rng.integers(21)))), (1, 0)])
        assert decide(Optimal(t), h, small_grid) is None
    trace = run(Optimal(t), endpoints(small_grid), small_grid, rng)
    assert trace.tau == 0 and trace.performance == t.S[10, 10, 20]


def test_fixed_budget_zero_and_exact(small_table):
    g = small_table.grid
    assert decide(FixedBudgetLookahead(0, small_table), endpoints(g), g) is None
    trace = run(FixedBudgetLookahead(3, small_table), endpoints(g), g, np.random.default_rng(2))
    assert trace.tau == 3 and trace.cost == 0.0
    with pytest.raises(ValueError):
        run(FixedBudgetLookahead(20, small_table), endpoints(g), g, np.random.default_rng(2))
    with pytest.raises(ValueError):
        FixedBudgetLookahead(-1, small_table)


def test_fixed_budget_samples_even_without_gain(bm, small_grid):
    t = solver.build_table(bm, small_grid, Indicator(0), 2.0)
    h = ObservationHistory.from_endpoints(0, 1, small_grid.y[-1], small_grid.y[-1])
    assert max(g for _, _, g, _ in improvements(FixedBudgetLookahead(1, t), h, small_grid)) <= 1e-12
    assert decide(FixedBudgetLookahead(1, t), h, small_grid) is not None
    assert decide(OneStepLookahead(0.01, t), h, small_grid) is None


def test_lookahead_first_sample_midpoint_brute_force():
    p, r = BrownianMotion(), Indicator(0)
    g = Grid.make(0, 1, 100, 21, prior=p)
    t = solver.build_table(p, g, r, 0.05)
    S = lru_cache(maxsize=None)(lambda j, a, b: stop_reward_index(r, p, g, j, a, b))
    mid = g.y_index(0)
    gains = []
    for x in range(1, 100):
        pmf = bridge_pmf_index(p, g, x, 100 - x, mid, mid)
        gains.append(sum(pmf[i] * (S(x, mid, i) + S(100 - x, i, mid)) for i in range(g.n)))
    best = int(np.argmax(gains)) + 1
    assert best == 50
    assert decide(OneStepLookahead(0.05, t), endpoints(g), g) == g.x_of(best)
    ours = [imp for _, _, imp, _ in improvements(OneStepLookahead(0.05, t), endpoints(g), g)]
    assert np.allclose(ours, np.array(gains) - S(100, mid, mid) - 0.05, atol=1e-12)


def test_leftmost_tie_break(cheap_table):
    g = cheap_table.grid
    # two identical gaps: the left one wins
    h = ObservationHistory.from_pairs(0, 1, [(0, 0), (0.5, 0), (1, 0)])
    x = decide(Optimal(cheap_table), h, g)
    assert x is not None and x < 0.5


def test_trace_properties(small_table):
    g = small_table.grid
    h0 = endpoints(g)
    for seed in range(20):
        trace = run(Optimal(small_table), h0, g, np.random.default_rng(seed))
        xs = [s.x for s in trace.steps]
        assert len(set(xs)) == len(xs) == trace.tau
        assert all(0 < x < 1 and x not in h0 for x in xs)
        assert all(abs(x / g.h - round(x / g.h)) < 1e-9 for x in xs)
        assert trace.final_reward == pytest.approx(small_table.stop_value(trace.history))
        assert trace.performance == pytest.approx(trace.final_reward - 0.05 * trace.tau)


def test_trace_reproducible(mid_table):
    g = mid_table.grid
    a = run(Optimal(mid_table), endpoints(g), g, np.random.default_rng(7), record_curves=True)
    b = run(Optimal(mid_table), endpoints(g), g, np.random.default_rng(7), record_curves=True)
    assert [(s.x, s.y, s.curve) for s in a.steps] == [(s.x, s.y, s.curve) for s in b.steps]
    assert a.steps[0].x == 0.5
    assert len(a.steps[0].curve) == g.m - 1


def test_translation_keeps_offsets(small_table):
    g = small_table.grid
    rng = np.random.default_rng(4)
    for _ in range(10):
        xs = sorted(set(int(v) for v in rng.integers(1, 20, 3)))
        pairs = [(0, g.y_of(int(rng.integers(21))))] + [(g.x_of(x), g.y_of(int(rng.integers(21)))) for x in xs] + [(1, g.y_of(int(rng.integers(21))))]
        h = ObservationHistory.from_pairs(0, 1, pairs)
        shift = g.h
        far = g.translate(shift)
        hs = h.translate(shift)
        for kind in (Optimal(small_table), OneStepLookahead(0.01, small_table)):
            x0, x1 = decide(kind, h, g), decide(kind, hs, far)
            assert (x0 is None) == (x1 is None)
            if x0 is not None:
                assert g.x_index(x0) == far.x_index(x1)
        assert [r[2] for r in improvements(Optimal(small_table), h, g)] == [r[2] for r in improvements(Optimal(small_table), hs, far)]


def test_off_grid_history_rejected(small_table):
    h = ObservationHistory.from_pairs(0, 1, [(0, 0), (0.333, 0), (1, 0)])
    with pytest.raises(ValueError):
        decide(Optimal(small_table), h, small_table.grid)


def test_sampling_order_does_not_matter(mid_table):
    g = mid_table.grid
    setup = Setup(mid_table.prior, g, mid_table.reward, 0.05, ObservationHistory.from_pairs(0, 1, [(0, 0), (0.3, 0), (1, 0)]))
    for kind in (Optimal(mid_table), OneStepLookahead(0.05, mid_table)):
        assert decide(kind, setup.h0, g) is not None
        tree = evaluate(kind, setup, 20000, 3)
        greedy = evaluate(kind, setup, 4000, 4, order="greedy")
        joint = np.hypot(tree.std_error, greedy.std_error)
        assert abs(tree.mean_performance - greedy.mean_performance) <= 3 * joint + 1e-12


def test_greedy_order_matches_table_value(small_table, small_setup):
    rep = evaluate(Optimal(small_table), small_setup, 3000, 8, order="greedy")
    v = small_table.value(small_setup.h0)
    assert abs(rep.mean_performance - v) <= 3 * rep.std_error
