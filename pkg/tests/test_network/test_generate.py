# -*- coding: utf-8 -*-
# mypy: ignore-errors

import numpy as np
import pytest

from tlan.network import generate_grid_network, motivating_network


def test_small_grid():
    net = generate_grid_network(2, 2, 100.0, 10.0)
    assert net.num_nodes == 4
    assert net.num_edges == 8
    assert net.edge_between(0, 1) is not None
    assert net.edge_between(1, 0) is not None
    assert net.edge_between(0, 3) is None
    assert net.positions[3] == (100.0, 100.0)


def test_large_grid():
    net = generate_grid_network(20, 20, 500.0, 13.9)
    assert net.num_nodes == 400
    assert net.num_edges == 1520
    # Every edge of an unjittered grid is identical
    times = {e.attrs.min_travel_time for e in net.edges.values()}
    assert len(times) == 1


def test_deterministic():
    a = generate_grid_network(4, 5, 300.0, 12.0, seed=7, jitter=0.2)
    b = generate_grid_network(4, 5, 300.0, 12.0, seed=7, jitter=0.2)
    c = generate_grid_network(4, 5, 300.0, 12.0, seed=8, jitter=0.2)
    speeds = [
        [e.attrs.speed_limit_mps for e in n.edges.values()] for n in (a, b, c)
    ]
    assert speeds[0] == speeds[1]
    assert speeds[0] != speeds[2]
    assert np.all(np.abs(np.array(speeds[0]) / 12.0 - 1) <= 0.2 + 1e-12)


def test_grid_validation():
    with pytest.raises(ValueError):
        generate_grid_network(1, 5, 100.0, 10.0)
    with pytest.raises(ValueError):
        generate_grid_network(3, 3, 100.0, 10.0, jitter=1.5)


def test_motivating_network():
    net = motivating_network()
    assert net.num_nodes == 6
    assert net.num_edges == 8
    route = [net.edge_between(u, v) for u, v in [(1, 2), (2, 3), (3, 4)]]
    assert route == [1, 2, 3]
    np.testing.assert_allclose(
        sum(net.attrs(e).min_travel_time for e in route), 0.03
    )
    np.testing.assert_allclose(
        sum(net.attrs(e).min_travel_time for e in (4, 5, 3)), 0.08
    )
    np.testing.assert_allclose(
        sum(net.attrs(e).min_travel_time for e in (1, 6, 7)), 0.08
    )

    custom = motivating_network(capacities={3: 2}, default_capacity=0.5)
    assert custom.attrs(3).free_flow_capacity == 2.0
    assert custom.attrs(1).free_flow_capacity == 0.5
