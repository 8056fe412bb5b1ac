import csv

import numpy as np
import pytest

from superlevel import solver
from superlevel.policy import FixedBudgetLookahead, OneStepLookahead, Optimal
from superlevel.prior import BrownianMotion, Grid
from superlevel.reward import Indicator
from superlevel.sim import CSV_COLUMNS, Setup, evaluate, sweep_cost, write_sweep_csv


@pytest.fixture(scope="module")
def setup41():
    p = BrownianMotion()
    return Setup.symmetric(p, Grid.make(0, 1, 50, 41, prior=p), Indicator(0), 0.05)


@pytest.fixture(scope="module")
def sweep(setup41):
    return sweep_cost(setup41, [0.01, 0.02, 0.05, 0.1], 4000, 11)


def test_no_sampling_regime_is_exact(small_setup):
    t = small_setup.table(2.0)
    rep = evaluate(Optimal(t), small_setup, 500, 0)
    assert rep.mean_performance == t.S[10, 10, 20]
    assert rep.std_error == 0.0 and rep.mean_tau == 0.0


def test_reps_validation(small_setup):
    with pytest.raises(ValueError):
        evaluate(Optimal(small_setup.table()), small_setup, 0, 0)
    with pytest.raises(ValueError):
        evaluate(Optimal(small_setup.table()), small_setup, 10, 0, order="random")


def test_reproducible(small_setup):
    a = evaluate(Optimal(small_setup.table()), small_setup, 2000, 5)
    b = evaluate(Optimal(small_setup.table()), small_setup, 2000, 5)
    assert a.to_dict() == b.to_dict()
    assert np.array_equal(a.performances, b.performances)
    c = evaluate(Optimal(small_setup.table()), small_setup, 2000, 6)
    assert c.mean_performance != a.mean_performance


def test_std_error_definition(small_setup):
    rep = evaluate(OneStepLookahead(0.05, small_setup.table()), small_setup, 3000, 1)
    x = rep.performances
    assert rep.replications == len(x) == 3000
    assert rep.std_error == pytest.approx(x.std(ddof=1) / np.sqrt(len(x)), rel=1e-12)
    assert rep.mean_performance == pytest.approx(rep.mean_reward - 0.05 * rep.mean_tau, abs=1e-12)


def test_optimal_mean_matches_table(setup41):
    t = setup41.table()
    rep = evaluate(Optimal(t), setup41, 20000, 2)
    assert abs(rep.mean_performance - t.value(setup41.h0)) <= 3 * rep.std_error


def test_fixed_budget_takes_exactly_T(setup41):
    t = setup41.table()
    rep = evaluate(FixedBudgetLookahead(4, t), setup41, 1000, 3)
    assert rep.mean_tau == 4 and rep.mean_performance == rep.mean_reward
    frac = evaluate(FixedBudgetLookahead(2.25, t), setup41, 4000, 3)
    assert 2.2 < frac.mean_tau < 2.3


def test_sweep_values_in_unit_band(sweep):
    row = next(r for r in sweep if r.c == 0.05)
    assert 0.5 < row.optimal_value < 1 and 0.5 < row.lookahead_value < 1


def test_sweep_optimal_non_increasing(sweep):
    v = [r.optimal_value for r in sweep]
    assert all(a >= b for a, b in zip(v, v[1:]))
    tv = [r.table_value for r in sweep]
    assert all(a >= b for a, b in zip(tv, tv[1:]))


def test_optimal_beats_lookahead_statistically(sweep):
    for r in sweep:
        assert r.optimal_value >= r.lookahead_value - 3 * np.hypot(r.optimal_se, r.lookahead_se)


def test_mean_tau_non_increasing(setup41):
    taus = []
    for c in (0.01, 0.05, 0.1):
        rep = evaluate(Optimal(setup41.table(c)), setup41, 4000, 0)
        taus.append(rep.mean_tau)
    assert taus[0] >= taus[1] >= taus[2]


def test_expensive_sweep_is_flat(small_setup):
    rows = sweep_cost(small_setup, [2, 3], 200, 0)
    for r in rows:
        assert r.optimal_value == r.lookahead_value == r.table_value
        assert r.optimal_value == pytest.approx(0.5, abs=0.03)
        assert r.ratio == 1.0


def test_sweep_validation(small_setup):
    with pytest.raises(ValueError):
        sweep_cost(small_setup, [0.1, 0.05], 10, 0)
    with pytest.raises(ValueError):
        sweep_cost(small_setup, [0, 0.05], 10, 0)


def test_sweep_csv(sweep, tmp_path):
    path = tmp_path / "s.csv"
    write_sweep_csv(sweep, path)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == CSV_COLUMNS
    assert len(rows) == len(sweep) + 1
    assert float(rows[1][5]) == sweep[0].ratio


def test_with_cost_shares_tables(small_setup):
    t = small_setup.table(0.05)
    other = small_setup.with_cost(0.05)
    assert other.table() is t and other.c == 0.05
