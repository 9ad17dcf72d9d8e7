# -*- coding: utf-8 -*-
"""
Single-query routing over a temporal load-aware network: the free-flow
baseline, the snapshot baseline, top-k selection, and load-aware A*.
"""

__all__ = [
    "Query",
    "Hop",
    "Path",
    "Router",
    "ROUTERS",
    "ALGORITHMS",
    "get_router",
    "path_cost",
    "evaluate_path_under_elm",
    "free_flow_path",
    "dijkstra_free_flow",
    "free_flow_search",
    "FreeFlowRouter",
    "tlaa_star",
    "slad",
    "LoadAwareRouter",
    "StaticLoadRouter",
    "yen_k_shortest",
    "k_shortest_edge_sequences",
    "tlat_k",
    "TopKRouter",
]

from tlan.routing.astar import (
    LoadAwareRouter,
    StaticLoadRouter,
    slad,
    tlaa_star,
)
from tlan.routing.dijkstra import (
    FreeFlowRouter,
    dijkstra_free_flow,
    free_flow_search,
)
from tlan.routing.evaluate import (
    evaluate_path_under_elm,
    free_flow_path,
    path_cost,
)
from tlan.routing.registry import ALGORITHMS, ROUTERS, get_router
from tlan.routing.router import Router
from tlan.routing.topk import TopKRouter, tlat_k
from tlan.routing.types import Hop, Path, Query
from tlan.routing.yen import k_shortest_edge_sequences, yen_k_shortest
