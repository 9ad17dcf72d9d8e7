# -*- coding: utf-8 -*-

from __future__ import annotations

__all__ = ["yen_k_shortest", "k_shortest_edge_sequences"]

import heapq
import logging
from typing import List, Set, Tuple

from tlan.errors import NoPathError
from tlan.helpers import EdgeId, NodeId
from tlan.network.graph import RoadNetwork
from tlan.routing.dijkstra import free_flow_search
from tlan.routing.evaluate import free_flow_path, path_cost
from tlan.routing.types import Path, Query

logger = logging.getLogger(__name__)

_Candidate = Tuple[float, Tuple[NodeId, ...], Tuple[EdgeId, ...]]


def _nodes(net: RoadNetwork, edges: Tuple[EdgeId, ...]) -> Tuple[NodeId, ...]:
    return (net.edge(edges[0]).src,) + tuple(net.edge(e).dst for e in edges)


def k_shortest_edge_sequences(
    net: RoadNetwork, source: NodeId, target: NodeId, k: int
) -> List[Tuple[float, Tuple[EdgeId, ...]]]:
    """Up to ``k`` loopless paths in order of free-flow cost

    Returns ``(cost, edge_sequence)`` pairs. Candidates with equal cost are
    ordered by their node sequence.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1; got {k}")
    first = free_flow_search(net, source, target)
    if first is None:
        return []
    first_edges = tuple(first)
    accepted: List[_Candidate] = [
        (path_cost(net, first_edges), _nodes(net, first_edges), first_edges)
    ]
    candidates: List[_Candidate] = []
    seen: Set[Tuple[EdgeId, ...]] = {first_edges}

    while len(accepted) < k:
        _, prev_nodes, prev_edges = accepted[-1]
        for i in range(len(prev_edges)):
            spur = prev_nodes[i]
            root_nodes = prev_nodes[: i + 1]
            root_edges = prev_edges[:i]
            banned_edges = {
                edges[i]
                for _, nodes, edges in accepted
                if len(edges) > i and nodes[: i + 1] == root_nodes
            }
            spur_edges = free_flow_search(
                net,
                spur,
                target,
                banned_nodes=set(root_nodes[:-1]),
                banned_edges=banned_edges,
            )
            if spur_edges is None:
                continue
            edges = root_edges + tuple(spur_edges)
            if edges in seen:
                continue
            seen.add(edges)
            heapq.heappush(
                candidates, (path_cost(net, edges), _nodes(net, edges), edges)
            )
        if not candidates:
            break
        accepted.append(heapq.heappop(candidates))

    return [(cost, edges) for cost, _, edges in accepted]


def yen_k_shortest(net: RoadNetwork, q: Query, k: int) -> List[Path]:
    """The ``k`` shortest loopless free-flow paths of a query

    Fewer than ``k`` paths are returned when fewer exist. Every path records
    the cost of the best one as the query's free-flow cost.

    Raises:
        NoPathError: If the destination cannot be reached at all.
    """
    ranked = k_shortest_edge_sequences(net, q.source, q.destination, k)
    if not ranked:
        raise NoPathError(
            f"No path from {q.source!r} to {q.destination!r}", query_id=q.id
        )
    best = ranked[0][0]
    logger.debug("Found %d of %d paths for query %r", len(ranked), k, q.id)
    return [
        free_flow_path(
            net, edges, q.depart, query_id=q.id, free_flow_cost=best
        )
        for _, edges in ranked
    ]
