# -*- coding: utf-8 -*-

from __future__ import annotations

__all__ = ["INF", "free_flow_heuristic", "HeuristicCache"]

from types import MappingProxyType
from typing import Any, Dict, Mapping, Optional

import networkx as nx

from tlan.helpers import NodeId
from tlan.network.graph import RoadNetwork

INF = float("inf")


def free_flow_heuristic(
    net: RoadNetwork,
    dest: NodeId,
    *,
    reverse: Optional[nx.DiGraph] = None,
) -> Mapping[NodeId, float]:
    """Free-flow travel time from every node to ``dest``

    This runs a single-source search over the reverse graph. Since congestion
    only ever adds time to a traversal, the values are admissible (and
    consistent) lower bounds for any load-aware search towards ``dest``.
    Nodes that cannot reach ``dest`` map to ``inf``.

    Args:
        net: The road network.
        dest: The destination node.
        reverse: The reversed ``networkx`` graph of ``net``, to avoid
            rebuilding it for every destination.
    """
    if dest not in net:
        raise KeyError(f"Unknown destination node {dest!r}")
    if reverse is None:
        reverse = net.to_networkx().reverse(copy=False)
    dist = nx.single_source_dijkstra_path_length(
        reverse, dest, weight="weight"
    )
    return MappingProxyType(
        {node: float(dist.get(node, INF)) for node in net.node_ids}
    )


class HeuristicCache:
    """Lazily computed and memoized free-flow heuristics, one per destination

    Pickled copies start out empty.
    """

    def __init__(self, net: RoadNetwork):
        self.net = net
        self._reverse: Optional[nx.DiGraph] = None
        self._cache: Dict[NodeId, Mapping[NodeId, float]] = {}

    def __call__(self, dest: NodeId) -> Mapping[NodeId, float]:
        cached = self._cache.get(dest)
        if cached is not None:
            return cached
        if self._reverse is None:
            self._reverse = self.net.to_networkx().reverse(copy=False)
        heuristic = free_flow_heuristic(self.net, dest, reverse=self._reverse)
        self._cache[dest] = heuristic
        return heuristic

    def __len__(self) -> int:
        return len(self._cache)

    def __getstate__(self) -> Dict[str, Any]:
        return {"net": self.net}

    def __setstate__(self, state: Dict[str, Any]) -> None:
        self.__init__(state["net"])  # type: ignore[misc]
