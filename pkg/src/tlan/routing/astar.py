# -*- coding: utf-8 -*-
"""
Load-aware A* search. Edge traversal times come from the arrival-time
function evaluated against an edge-load matrix, and the free-flow distance to
the destination serves as the heuristic. Congestion can only slow a vehicle
down, so the heuristic is consistent and, because the network is
first-in-first-out, a node's earliest arrival is final once it is settled.
"""

from __future__ import annotations

__all__ = ["tlaa_star", "slad", "LoadAwareRouter", "StaticLoadRouter"]

import heapq
import math
from typing import Dict, Mapping, Optional, Tuple

from tlan.arrival import traverse
from tlan.errors import HorizonOverflowError, NoPathError
from tlan.helpers import TIME_TOL, EdgeId, NodeId
from tlan.network.graph import RoadNetwork
from tlan.network.heuristic import INF, free_flow_heuristic
from tlan.routing.dijkstra import trace_edges
from tlan.routing.evaluate import evaluate_path_under_elm
from tlan.routing.router import Router
from tlan.routing.types import Path, Query
from tlan.state import LoadView, snapshot_at


def _search(
    net: RoadNetwork,
    loads: LoadView,
    q: Query,
    heuristic: Mapping[NodeId, float],
) -> Path:
    source, target = q.source, q.destination
    h_source = heuristic.get(source, INF)
    if h_source == INF:
        raise NoPathError(
            f"No path from {source!r} to {target!r}", query_id=q.id
        )

    arrival: Dict[NodeId, float] = {source: q.depart}
    pred: Dict[NodeId, Tuple[NodeId, EdgeId]] = {}
    done = set()
    heap = [(q.depart + h_source, source)]
    overflow = False
    while heap:
        _, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        if v == target:
            break
        a = arrival[v]
        for w, eid in net.successors(v):
            if w in done:
                continue
            h_w = heuristic.get(w, INF)
            if h_w == INF:
                continue
            try:
                a_w = traverse(loads, eid, net.attrs(eid), a)
            except HorizonOverflowError:
                overflow = True
                continue
            old = arrival.get(w)
            if old is None or a_w < old - TIME_TOL:
                arrival[w] = a_w
                pred[w] = (v, eid)
                heapq.heappush(heap, (a_w + h_w, w))
            elif abs(a_w - old) <= TIME_TOL and (v, eid) < pred[w]:
                pred[w] = (v, eid)

    if target not in done:
        if overflow:
            raise HorizonOverflowError(
                f"Every route from {source!r} to {target!r} leaves the "
                "horizon",
                query_id=q.id,
            )
        raise NoPathError(
            f"No path from {source!r} to {target!r}", query_id=q.id
        )
    return evaluate_path_under_elm(
        net,
        loads,
        trace_edges(pred, source, target),
        q.depart,
        query_id=q.id,
        free_flow_cost=h_source,
    )


def tlaa_star(
    net: RoadNetwork,
    elm: LoadView,
    q: Query,
    heuristic: Optional[Mapping[NodeId, float]] = None,
) -> Path:
    """The earliest-arrival path of a query under the current loads

    Args:
        net: The road network.
        elm: The loads to plan against.
        q: The query.
        heuristic: The free-flow distances to ``q.destination``; computed on
            demand if omitted.

    Raises:
        NoPathError: If the destination cannot be reached.
        HorizonOverflowError: If every route leaves the horizon.
    """
    if heuristic is None:
        heuristic = free_flow_heuristic(net, q.destination)
    return _search(net, elm, q, heuristic)


def slad(
    net: RoadNetwork,
    elm: LoadView,
    q: Query,
    heuristic: Optional[Mapping[NodeId, float]] = None,
) -> Path:
    """Plan against the loads frozen at the departure interval

    Every load read uses the load recorded in interval ``floor(q.depart)``,
    so the times on the returned path are estimates; the actual times follow
    from a replay.
    """
    if heuristic is None:
        heuristic = free_flow_heuristic(net, q.destination)
    interval = min(math.floor(q.depart), elm.horizon - 1)
    return _search(net, snapshot_at(elm, interval), q, heuristic)


class LoadAwareRouter(Router):
    name = "tlaa"

    def route(self, q: Query, elm: LoadView) -> Path:
        return tlaa_star(self.net, elm, q, self.heuristics(q.destination))


class StaticLoadRouter(Router):
    name = "slad"
    cell_local = False

    def route(self, q: Query, elm: LoadView) -> Path:
        return slad(self.net, elm, q, self.heuristics(q.destination))
