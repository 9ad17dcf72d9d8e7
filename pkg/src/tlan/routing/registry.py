# -*- coding: utf-8 -*-

from __future__ import annotations

__all__ = ["ROUTERS", "ALGORITHMS", "get_router"]

from typing import Any, Dict, Tuple, Type

from tlan.network.graph import RoadNetwork
from tlan.routing.astar import LoadAwareRouter, StaticLoadRouter
from tlan.routing.dijkstra import FreeFlowRouter
from tlan.routing.router import Router
from tlan.routing.topk import TopKRouter

ROUTERS: Dict[str, Type[Router]] = {
    cls.name: cls
    for cls in (FreeFlowRouter, StaticLoadRouter, TopKRouter, LoadAwareRouter)
}

#: Every algorithm name accepted by the experiment runner; ``csmat`` wraps one
#: of the single-query routers
ALGORITHMS: Tuple[str, ...] = ("ffnd", "slad", "tlatk", "tlaa", "csmat")


def get_router(name: str, net: RoadNetwork, **kwargs: Any) -> Router:
    """Build the single-query router registered under ``name``

    Keyword arguments the router does not use (such as ``k`` for routers
    other than ``tlatk``) are ignored.
    """
    try:
        cls = ROUTERS[name]
    except KeyError:
        raise ValueError(
            f"Unknown router {name!r}; expected one of {sorted(ROUTERS)}"
        ) from None
    if cls is not TopKRouter:
        kwargs.pop("k", None)
    return cls.init(net, **kwargs)
