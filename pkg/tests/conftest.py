# -*- coding: utf-8 -*-
# mypy: ignore-errors

import jax
import numpy as np
import pytest

from tlan.network import (
    Edge,
    EdgeAttrs,
    NetworkConfig,
    RoadNetwork,
    generate_grid_network,
    motivating_network,
)

jax.config.update("jax_enable_x64", True)


def _network(records, cfg=None):
    """A network from ``(edge_id, src, dst, min_travel_time, capacity)``"""
    cfg = NetworkConfig() if cfg is None else cfg
    nodes = []
    edges = []
    for eid, src, dst, upsilon, capacity in records:
        for node in (src, dst):
            if node not in nodes:
                nodes.append(node)
        length = upsilon * cfg.interval_length_s * 10.0 / 1.5
        attrs = EdgeAttrs(
            length_m=length,
            speed_limit_mps=10.0,
            min_travel_time=upsilon,
            free_flow_capacity=capacity,
        )
        edges.append(Edge(eid, src, dst, attrs))
    return RoadNetwork(sorted(nodes), edges, cfg)


@pytest.fixture
def random():
    return np.random.default_rng(20231)


@pytest.fixture
def make_network():
    return _network


@pytest.fixture
def line_net():
    return _network([("ab", "a", "b", 0.1, 5.0), ("bc", "b", "c", 0.1, 5.0)])


@pytest.fixture
def diamond_net():
    return _network(
        [
            ("sm", "s", "m", 0.1, 5.0),
            ("md", "m", "d", 0.1, 5.0),
            ("su", "s", "u", 0.15, 5.0),
            ("ud", "u", "d", 0.15, 5.0),
        ]
    )


@pytest.fixture
def motivating_net():
    """Six vehicles; the literal instance (capacity 4, t=0) never delays"""
    # Capacities small enough that a third vehicle on a route is delayed
    return motivating_network(capacities={1: 2, 3: 2}, default_capacity=0.5)


@pytest.fixture
def grid_net():
    return generate_grid_network(5, 5, 400.0, 12.0, seed=3, jitter=0.3)


@pytest.fixture
def large_grid_net():
    return generate_grid_network(10, 10, 400.0, 12.0, seed=5, jitter=0.3)
