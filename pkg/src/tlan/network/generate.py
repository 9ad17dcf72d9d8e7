# -*- coding: utf-8 -*-

from __future__ import annotations

__all__ = ["generate_grid_network", "motivating_network"]

import logging
from typing import Dict, List, Mapping, Optional

import networkx as nx
import numpy as np

from tlan.helpers import EdgeId
from tlan.network.config import NetworkConfig
from tlan.network.graph import Edge, EdgeAttrs, RoadNetwork

logger = logging.getLogger(__name__)


def generate_grid_network(
    rows: int,
    cols: int,
    edge_len_m: float,
    speed_mps: float,
    cfg: Optional[NetworkConfig] = None,
    seed: int = 0,
    *,
    jitter: float = 0.0,
) -> RoadNetwork:
    """A bidirectional Manhattan grid

    Node ``(r, c)`` of the grid gets the integer id ``r * cols + c`` and is
    placed at ``(c * edge_len_m, r * edge_len_m)``. Every undirected grid
    adjacency becomes two directed edges, numbered in sorted ``(src, dst)``
    order.

    Args:
        rows: The number of grid rows (at least 2).
        cols: The number of grid columns (at least 2).
        edge_len_m: The length of every road.
        speed_mps: The nominal speed limit of every road.
        cfg: The network configuration.
        seed: The seed for the speed jitter.
        jitter: If positive, every speed limit is multiplied by an
            independent factor drawn uniformly from ``[1 - jitter, 1 +
            jitter]``.
    """
    if rows < 2 or cols < 2:
        raise ValueError(
            f"A grid needs at least 2 rows and 2 columns; got {rows}x{cols}"
        )
    if not 0 <= jitter < 1:
        raise ValueError(f"jitter must be in [0, 1); got {jitter}")
    cfg = NetworkConfig() if cfg is None else cfg

    grid = nx.grid_2d_graph(rows, cols).to_directed()
    pairs = sorted(
        (r1 * cols + c1, r2 * cols + c2) for (r1, c1), (r2, c2) in grid.edges
    )
    rng = np.random.default_rng(seed)
    if jitter > 0:
        factors = 1.0 + rng.uniform(-jitter, jitter, size=len(pairs))
    else:
        factors = np.ones(len(pairs))

    edges = [
        Edge(
            eid,
            src,
            dst,
            EdgeAttrs.derive(edge_len_m, float(speed_mps * factor), cfg),
        )
        for eid, ((src, dst), factor) in enumerate(zip(pairs, factors))
    ]
    positions = {
        r * cols + c: (float(c * edge_len_m), float(r * edge_len_m))
        for r in range(rows)
        for c in range(cols)
    }
    logger.debug("Generated %dx%d grid (seed=%d)", rows, cols, seed)
    return RoadNetwork(sorted(positions), edges, cfg, positions=positions)


# (edge_id, src, dst, multiples of base_time, multiples of detour)
_MOTIVATING_EDGES = [
    (1, 1, 2, 1, 0),
    (2, 2, 3, 1, 0),
    (3, 3, 4, 1, 0),
    (4, 1, 5, 1, 0),
    (5, 5, 3, 1, 1),
    (6, 2, 6, 1, 0),
    (7, 6, 4, 1, 1),
    (8, 4, 1, 3, 0),
]


def motivating_network(
    cfg: Optional[NetworkConfig] = None,
    *,
    base_time: float = 0.01,
    detour: float = 0.05,
    capacities: Optional[Mapping[EdgeId, float]] = None,
    default_capacity: float = 4.0,
) -> RoadNetwork:
    """The six-intersection network with three competing routes from 1 to 4

    The direct route ``1-2-3-4`` takes ``3 * base_time`` intervals and the
    two alternatives ``1-5-3-4`` and ``1-2-6-4`` each take ``detour`` longer.
    Edge ``8`` is the return road ``4 -> 1``. Edge ids are ``1, ..., 8`` in
    the order ``12, 23, 34, 15, 53, 26, 64, 41``.

    Args:
        cfg: The network configuration.
        base_time: The traversal time of a plain edge, in intervals.
        detour: The extra time of each alternative route, in intervals.
        capacities: Per-edge capacity overrides.
        default_capacity: The capacity of edges missing from ``capacities``.
    """
    cfg = NetworkConfig() if cfg is None else cfg
    capacities = {} if capacities is None else capacities
    speed = 10.0
    edges: List[Edge] = []
    for eid, src, dst, n_base, n_detour in _MOTIVATING_EDGES:
        upsilon = n_base * base_time + n_detour * detour
        length = (
            upsilon
            * cfg.interval_length_s
            * speed
            / (1 + cfg.transition_penalty_factor)
        )
        attrs = EdgeAttrs(
            length_m=length,
            speed_limit_mps=speed,
            min_travel_time=upsilon,
            free_flow_capacity=float(capacities.get(eid, default_capacity)),
        )
        edges.append(Edge(eid, src, dst, attrs))
    positions: Dict[int, tuple] = {
        1: (0.0, 1.0),
        2: (1.0, 2.0),
        3: (2.0, 1.0),
        4: (3.0, 1.0),
        5: (1.0, 0.0),
        6: (2.0, 2.0),
    }
    return RoadNetwork(range(1, 7), edges, cfg, positions=positions)
