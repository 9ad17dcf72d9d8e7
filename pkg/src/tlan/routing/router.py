# -*- coding: utf-8 -*-

from __future__ import annotations

__all__ = ["Router"]

from abc import ABCMeta, abstractmethod
from typing import Any, Optional

from tlan.network.graph import RoadNetwork
from tlan.network.heuristic import HeuristicCache
from tlan.routing.types import Path, Query
from tlan.state import LoadView


class Router(metaclass=ABCMeta):
    """An abstract base class for single-query routing algorithms

    Routers hold the (immutable) network and any per-network caches. They
    must be picklable: batch planners send a copy to every worker process.

    Args:
        net: The road network.
        heuristics: A cache of free-flow heuristics to share with other
            routers on the same network.
    """

    #: The short name used to select the algorithm on the command line
    name: str = ""

    #: Whether the router reads the edge loads when planning
    load_aware: bool = True

    #: Whether a plan stays valid while none of the cells it occupies gains
    #: load, which lets batch planners re-plan only intersecting queries
    cell_local: bool = True

    def __init__(
        self,
        net: RoadNetwork,
        *,
        heuristics: Optional[HeuristicCache] = None,
        **kwargs: Any,
    ):
        self.net = net
        self.heuristics = (
            HeuristicCache(net) if heuristics is None else heuristics
        )

    @classmethod
    def init(cls, net: RoadNetwork, **kwargs: Any) -> "Router":
        return cls(net, **kwargs)

    @abstractmethod
    def route(self, q: Query, elm: LoadView) -> Path:
        """Plan a path for ``q`` given the loads in ``elm``

        Raises:
            NoPathError: If the destination cannot be reached.
            HorizonOverflowError: If every route leaves the horizon.
        """
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r})"
