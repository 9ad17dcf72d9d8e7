# -*- coding: utf-8 -*-
"""
The road network data model. A :class:`RoadNetwork` is an immutable directed
graph whose edges carry an :class:`EdgeAttrs` record with the road length,
speed limit, free-flow traversal time ``Υ`` and free-flow capacity ``F``. The
time-related quantities are expressed in units of one discrete interval, as
configured by a :class:`NetworkConfig`.

Networks are usually loaded from disk with :func:`load_network` or generated
with :func:`generate_grid_network`.
"""

__all__ = [
    "NetworkConfig",
    "RoadGeometry",
    "EdgeAttrs",
    "Edge",
    "RoadNetwork",
    "compute_free_flow_capacity",
    "compute_min_travel_time",
    "load_network",
    "save_network",
    "generate_grid_network",
    "motivating_network",
    "free_flow_heuristic",
    "HeuristicCache",
    "INF",
]

from tlan.network.config import NetworkConfig
from tlan.network.generate import generate_grid_network, motivating_network
from tlan.network.graph import (
    Edge,
    EdgeAttrs,
    RoadGeometry,
    RoadNetwork,
    compute_free_flow_capacity,
    compute_min_travel_time,
)
from tlan.network.heuristic import INF, HeuristicCache, free_flow_heuristic
from tlan.network.io import load_network, save_network
