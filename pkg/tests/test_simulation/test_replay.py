# -*- coding: utf-8 -*-
# mypy: ignore-errors

import numpy as np
import pytest

from tlan.network import NetworkConfig
from tlan.routing import Query
from tlan.simulation import (
    ReplayEntry,
    apply_control_factor,
    replay_assignment,
)
from tlan.state import EdgeLoadMatrix


@pytest.fixture
def feeder_net(make_network):
    return make_network(
        [("e1", "a", "b", 0.3, 0.5), ("e2", "b", "c", 0.1, 0.5)]
    )


def test_shared_edge(make_network):
    net = make_network([("e", "a", "b", 0.1, 0.5)])
    entries = [
        ReplayEntry(Query(i, "a", "b", 0.5), ("e",), 0.1) for i in (2, 0, 1)
    ]
    result = replay_assignment(net, entries)
    arrivals = {qid: p.total_arrival for qid, p in result.paths.items()}
    np.testing.assert_allclose(arrivals[0], 0.6)
    np.testing.assert_allclose(arrivals[1], 0.6)
    np.testing.assert_allclose(arrivals[2], 0.5 ** (2 / 3) + 0.1)
    np.testing.assert_allclose(result.penalties[2], 0.5 ** (2 / 3) - 0.5)
    assert result.elm.load("e", 0) == 3
    assert not result.dropped


def test_replay_orders(feeder_net):
    entries = [
        ReplayEntry(Query("A", "a", "c", 0.5), ("e1", "e2"), 0.4),
        ReplayEntry(Query("B", "b", "c", 0.6), ("e2",), 0.1),
        ReplayEntry(Query("C", "b", "c", 0.6), ("e2",), 0.1),
    ]

    # B and C reach the shared road first
    chrono = replay_assignment(feeder_net, entries)
    np.testing.assert_allclose(
        chrono.paths["A"].total_arrival, 0.8 ** (2 / 3) + 0.1
    )
    np.testing.assert_allclose(chrono.paths["B"].total_arrival, 0.7)
    np.testing.assert_allclose(chrono.paths["C"].total_arrival, 0.7)

    # In assignment order A is re-timed as if it had the road to itself
    ordered = replay_assignment(feeder_net, entries, order="assignment")
    np.testing.assert_allclose(ordered.paths["A"].total_arrival, 0.9)
    np.testing.assert_allclose(ordered.paths["B"].total_arrival, 0.7)
    np.testing.assert_allclose(
        ordered.paths["C"].total_arrival, 0.6 ** (2 / 3) + 0.1
    )
    assert ordered.elm == chrono.elm


def test_dropped_vehicles_keep_partial_load(make_network):
    net = make_network(
        [("e1", "a", "b", 0.3, 5.0), ("e2", "b", "c", 0.3, 5.0)],
        NetworkConfig(horizon_intervals=1),
    )
    entries = [
        ReplayEntry(Query(0, "a", "c", 0.5), ("e1", "e2"), 0.6, 0.25),
        ReplayEntry(Query(1, "a", "b", 0.1), ("e1",), 0.3, 0.5),
    ]
    result = replay_assignment(net, entries)
    assert result.dropped == (0,)
    assert list(result.paths) == [1]
    assert result.runtimes == {1: 0.5}
    assert result.elm.load("e1", 0) == 2
    assert result.elm.load("e2", 0) == 0


def test_background(feeder_net):
    background = EdgeLoadMatrix(feeder_net.horizon)
    background.set_load("e2", 0, 2)
    background.freeze()
    entries = [ReplayEntry(Query(0, "b", "c", 0.5), ("e2",), 0.1)]
    result = replay_assignment(feeder_net, entries, background=background)
    np.testing.assert_allclose(
        result.paths[0].total_arrival, 0.5 ** (2 / 3) + 0.1
    )
    assert result.elm.controlled_load("e2", 0) == 1


def test_validation(feeder_net):
    entry = ReplayEntry(Query(0, "b", "c", 0.5), ("e2",), 0.1)
    with pytest.raises(ValueError):
        replay_assignment(feeder_net, [entry, entry])
    with pytest.raises(ValueError):
        replay_assignment(feeder_net, [entry], order="random")


def test_control_factor():
    base = EdgeLoadMatrix(4)
    base.set_load("e", 0, 10)
    base.set_load("e", 1, 1)
    base.set_load("f", 3, 3)

    assert apply_control_factor(base, 0.3).load("e", 0) == 7
    assert apply_control_factor(base, 0.5).load("e", 0) == 5
    assert apply_control_factor(base, 0.25).load("e", 0) == 8

    background = apply_control_factor(base, 0.6)
    assert background.frozen
    assert dict(background.cells()) == {("e", 0): 4, ("f", 3): 1}
    assert len(apply_control_factor(base, 1.0)) == 0
    assert apply_control_factor(base, 0.0) == base

    with pytest.raises(ValueError):
        apply_control_factor(base, 1.5)
