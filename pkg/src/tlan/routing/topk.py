# -*- coding: utf-8 -*-

from __future__ import annotations

__all__ = ["tlat_k", "TopKRouter"]

from typing import Any, Dict, List, Optional, Sequence, Tuple

from tlan.errors import HorizonOverflowError, NoPathError
from tlan.helpers import TIME_TOL, EdgeId, NodeId
from tlan.network.graph import RoadNetwork
from tlan.routing.evaluate import evaluate_path_under_elm, free_flow_path
from tlan.routing.router import Router
from tlan.routing.types import Path, Query
from tlan.routing.yen import k_shortest_edge_sequences
from tlan.state import LoadView


def tlat_k(
    net: RoadNetwork,
    elm: LoadView,
    q: Query,
    precomputed: Sequence[Path],
) -> Path:
    """Pick the earliest-arriving path among precomputed candidates

    Each candidate is re-timed hop by hop under ``elm`` from ``q.depart``.
    Equal arrivals go to the candidate listed first.

    Args:
        net: The road network.
        elm: The loads to plan against.
        q: The query.
        precomputed: The free-flow candidates in rank order, typically from
            :func:`tlan.routing.yen_k_shortest`.

    Raises:
        NoPathError: If there are no candidates or every one of them leaves
            the horizon.
    """
    if not precomputed:
        raise NoPathError(
            f"No candidate paths for query {q.id!r}", query_id=q.id
        )
    free_flow_cost = precomputed[0].free_flow_cost
    best: Optional[Path] = None
    for candidate in precomputed:
        try:
            path = evaluate_path_under_elm(
                net,
                elm,
                candidate.edge_ids,
                q.depart,
                query_id=q.id,
                free_flow_cost=free_flow_cost,
            )
        except HorizonOverflowError:
            continue
        if (
            best is None
            or path.total_arrival < best.total_arrival - TIME_TOL
        ):
            best = path
    if best is None:
        raise NoPathError(
            f"All {len(precomputed)} candidates of query {q.id!r} leave the "
            "horizon",
            query_id=q.id,
        )
    return best


class TopKRouter(Router):
    """Choose among the ``k`` free-flow shortest paths of each query

    The candidate edge sequences are computed once per origin-destination
    pair and kept for the lifetime of the router.

    Args:
        net: The road network.
        k: The number of free-flow candidates per pair.
    """

    name = "tlatk"

    def __init__(self, net: RoadNetwork, *, k: int = 5, **kwargs: Any):
        if k < 1:
            raise ValueError(f"k must be at least 1; got {k}")
        super().__init__(net, **kwargs)
        self.k = k
        self._cache: Dict[
            Tuple[NodeId, NodeId], List[Tuple[float, Tuple[EdgeId, ...]]]
        ] = {}

    def candidates(self, q: Query) -> List[Path]:
        """The free-flow candidates of ``q``, timed from its departure"""
        key = (q.source, q.destination)
        ranked = self._cache.get(key)
        if ranked is None:
            ranked = k_shortest_edge_sequences(
                self.net, q.source, q.destination, self.k
            )
            self._cache[key] = ranked
        if not ranked:
            return []
        best = ranked[0][0]
        return [
            free_flow_path(
                self.net, edges, q.depart, query_id=q.id, free_flow_cost=best
            )
            for _, edges in ranked
        ]

    def route(self, q: Query, elm: LoadView) -> Path:
        return tlat_k(self.net, elm, q, self.candidates(q))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r}, k={self.k})"
