import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from superlevel.history import Observation, ObservationHistory, gaps, insert


def h2():
    return ObservationHistory.from_endpoints(0, 1, 0, 0)


def test_insert_sorted():
    h = insert(h2(), Observation(0.5, 0.3))
    assert [(o.x, o.y) for o in h] == [(0, 0), (0.5, 0.3), (1, 0)]


def test_insert_existing_location_is_noop():
    h = h2()
    assert insert(h, Observation(0, 7)) == h
    assert insert(h, Observation(1, -2)) is h


def test_insert_outside_rejected():
    with pytest.raises(ValueError):
        insert(h2(), Observation(1.5, 0))


def test_observation_negative_x():
    with pytest.raises(ValueError):
        Observation(-0.1, 0)


def test_gaps_examples():
    assert gaps(h2()) == [(Observation(0, 0), Observation(1, 0))]
    h = ObservationHistory.from_pairs(0, 1, [(0, 0), (0.5, 0.3), (1, 0)])
    assert gaps(h) == [(Observation(0, 0), Observation(0.5, 0.3)), (Observation(0.5, 0.3), Observation(1, 0))]
    h = ObservationHistory.from_pairs(0, 1, [(0, 0), (0.25, -1), (0.75, 2), (1, 0)])
    g = gaps(h)
    assert len(g) == 3
    assert all(left[1] == right[0] for left, right in zip(g, g[1:]))


@pytest.mark.parametrize(
    "a,b,pairs",
    [
        (1, 0, [(0, 0), (1, 0)]),
        (0, 1, [(0, 0)]),
        (0, 1, [(0, 0), (1, 0), (2, 0)]),
        (0, 1, [(0.1, 0), (1, 0)]),
    ],
)
def test_invalid_histories(a, b, pairs):
    with pytest.raises(ValueError):
        ObservationHistory.from_pairs(a, b, pairs)


def test_from_pairs_repeated_location_keeps_first():
    h = ObservationHistory.from_pairs(0, 1, [(0, 0), (0.5, 2), (0.5, 1), (1, 0)])
    assert h.xs == [0, 0.5, 1]
    assert h.obs[1].y == 2


def test_unsorted_obs_rejected():
    with pytest.raises(ValueError):
        ObservationHistory(0, 1, (Observation(0, 0), Observation(1, 0), Observation(0.5, 0)))


def test_json_roundtrip():
    h = ObservationHistory.from_pairs(0, 2, [(0, 0.5), (0.75, -1.25), (2, 3)])
    text = h.to_json()
    assert json.loads(text) == {"a": 0, "b": 2, "obs": [[0, 0.5], [0.75, -1.25], [2, 3]]}
    assert ObservationHistory.from_json(text) == h


def test_translate():
    h = ObservationHistory.from_pairs(0, 1, [(0, 0), (0.25, 1), (1, 0)]).translate(0.5)
    assert (h.a, h.b) == (0.5, 1.5)
    assert h.xs == [0.5, 0.75, 1.5]


@given(st.lists(st.tuples(st.integers(1, 99), st.floats(-5, 5)), max_size=20))
def test_gaps_cover_interval(points):
    h = h2()
    for x, y in points:
        before = len(h.gaps())
        fresh = x / 100 not in h
        h = h.insert(Observation(x / 100, y))
        assert len(h.gaps()) == before + fresh
    g = h.gaps()
    assert g[0][0].x == h.a and g[-1][1].x == h.b
    assert all(l0 == r0 for (_, l0), (r0, _) in zip(g, g[1:]))
    assert all(left.x < right.x for left, right in g)


def test_insert_splits_one_gap():
    h = ObservationHistory.from_pairs(0, 1, [(0, 0), (0.25, 1), (1, 0)])
    o = Observation(0.5, 2)
    after = h.insert(o).gaps()
    assert after[1] == (Observation(0.25, 1), o)
    assert after[2] == (o, Observation(1, 0))
    assert after[0] == h.gaps()[0]
