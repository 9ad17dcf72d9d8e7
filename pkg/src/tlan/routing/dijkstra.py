# -*- coding: utf-8 -*-

from __future__ import annotations

__all__ = ["dijkstra_free_flow", "free_flow_search", "FreeFlowRouter"]

import heapq
from typing import AbstractSet, Dict, List, Optional, Tuple

from tlan.errors import NoPathError
from tlan.helpers import TIME_TOL, EdgeId, NodeId
from tlan.network.graph import RoadNetwork
from tlan.routing.evaluate import free_flow_path, path_cost
from tlan.routing.router import Router
from tlan.routing.types import Path, Query
from tlan.state import LoadView


def trace_edges(
    pred: Dict[NodeId, Tuple[NodeId, EdgeId]], source: NodeId, target: NodeId
) -> List[EdgeId]:
    edges: List[EdgeId] = []
    node = target
    while node != source:
        node, eid = pred[node]
        edges.append(eid)
    edges.reverse()
    return edges


def free_flow_search(
    net: RoadNetwork,
    source: NodeId,
    target: NodeId,
    *,
    banned_nodes: AbstractSet[NodeId] = frozenset(),
    banned_edges: AbstractSet[EdgeId] = frozenset(),
) -> Optional[List[EdgeId]]:
    """The edge sequence of a minimum free-flow cost path, or ``None``

    Among equally short paths, every node keeps the predecessor with the
    smallest ``(node id, edge id)``, so that the result does not depend on
    the expansion order.
    """
    dist: Dict[NodeId, float] = {source: 0.0}
    pred: Dict[NodeId, Tuple[NodeId, EdgeId]] = {}
    done = set()
    heap = [(0.0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        if v == target:
            return trace_edges(pred, source, target)
        for w, eid in net.successors(v):
            if w in done or w in banned_nodes or eid in banned_edges:
                continue
            nd = d + net.attrs(eid).min_travel_time
            old = dist.get(w)
            if old is None or nd < old - TIME_TOL:
                dist[w] = nd
                pred[w] = (v, eid)
                heapq.heappush(heap, (nd, w))
            elif abs(nd - old) <= TIME_TOL and (v, eid) < pred[w]:
                pred[w] = (v, eid)
    return None


def dijkstra_free_flow(net: RoadNetwork, q: Query) -> Path:
    """The free-flow shortest path of a query, ignoring all loads

    Raises:
        NoPathError: If the destination cannot be reached.
    """
    edges = free_flow_search(net, q.source, q.destination)
    if edges is None:
        raise NoPathError(
            f"No path from {q.source!r} to {q.destination!r}", query_id=q.id
        )
    return free_flow_path(
        net,
        edges,
        q.depart,
        query_id=q.id,
        free_flow_cost=path_cost(net, edges),
    )


class FreeFlowRouter(Router):
    """Route every query along its free-flow shortest path"""

    name = "ffnd"
    load_aware = False

    def route(self, q: Query, elm: LoadView) -> Path:
        return dijkstra_free_flow(self.net, q)
