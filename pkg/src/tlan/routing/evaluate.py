# -*- coding: utf-8 -*-

from __future__ import annotations

__all__ = ["evaluate_path_under_elm", "free_flow_path", "path_cost"]

import math
from typing import List, Optional, Sequence

from tlan.arrival import traverse
from tlan.helpers import EdgeId, QueryId
from tlan.network.graph import RoadNetwork
from tlan.routing.types import Hop, Path
from tlan.state import LoadView


def path_cost(net: RoadNetwork, edge_sequence: Sequence[EdgeId]) -> float:
    """The free-flow travel time of an edge sequence"""
    return math.fsum(net.attrs(e).min_travel_time for e in edge_sequence)


def _check_connected(
    net: RoadNetwork, edge_sequence: Sequence[EdgeId]
) -> None:
    if not edge_sequence:
        raise ValueError("Cannot evaluate an empty edge sequence")
    for a, b in zip(edge_sequence[:-1], edge_sequence[1:]):
        if net.edge(a).dst != net.edge(b).src:
            raise ValueError(f"Edges {a!r} and {b!r} are not connected")


def evaluate_path_under_elm(
    net: RoadNetwork,
    elm: LoadView,
    edge_sequence: Sequence[EdgeId],
    depart: float,
    *,
    query_id: Optional[QueryId] = None,
    free_flow_cost: Optional[float] = None,
) -> Path:
    """Walk a fixed edge sequence through the load-aware network

    The arrival-time function is applied hop by hop starting at ``depart``,
    reading loads from ``elm``.

    Args:
        net: The road network.
        elm: The loads to evaluate against.
        edge_sequence: A connected sequence of edge ids.
        depart: The departure time in interval units.
        query_id: The query id recorded on the returned path.
        free_flow_cost: The free-flow cost of the query; defaults to the
            free-flow cost of ``edge_sequence`` itself.

    Raises:
        HorizonOverflowError: If the walk does not finish within the horizon.
    """
    _check_connected(net, edge_sequence)
    hops: List[Hop] = []
    t = depart
    for eid in edge_sequence:
        edge = net.edge(eid)
        exit_t = traverse(elm, eid, edge.attrs, t)
        hops.append(Hop(eid, edge.src, edge.dst, t, exit_t))
        t = exit_t
    if free_flow_cost is None:
        free_flow_cost = path_cost(net, edge_sequence)
    return Path(
        query_id=query_id,
        hops=tuple(hops),
        depart=depart,
        free_flow_cost=free_flow_cost,
    )


def free_flow_path(
    net: RoadNetwork,
    edge_sequence: Sequence[EdgeId],
    depart: float,
    *,
    query_id: Optional[QueryId] = None,
    free_flow_cost: Optional[float] = None,
) -> Path:
    """Annotate an edge sequence with free-flow times, ignoring the horizon"""
    _check_connected(net, edge_sequence)
    hops: List[Hop] = []
    t = depart
    for eid in edge_sequence:
        edge = net.edge(eid)
        exit_t = t + edge.attrs.min_travel_time
        hops.append(Hop(eid, edge.src, edge.dst, t, exit_t))
        t = exit_t
    if free_flow_cost is None:
        free_flow_cost = path_cost(net, edge_sequence)
    return Path(
        query_id=query_id,
        hops=tuple(hops),
        depart=depart,
        free_flow_cost=free_flow_cost,
    )
