# -*- coding: utf-8 -*-

from __future__ import annotations

__all__ = ["Query", "Hop", "Path"]

import math
from typing import Iterator, NamedTuple, Tuple

from tlan.helpers import TIME_TOL, Cell, EdgeId, NodeId, QueryId, dataclass


@dataclass
class Query:
    """A shortest path query

    Args:
        id: A unique identifier for the query.
        source: The origin node ``v_s``.
        destination: The destination node ``v_d``.
        depart: The departure time ``t`` in interval units.
    """

    id: QueryId
    source: NodeId
    destination: NodeId
    depart: float

    def __post_init__(self) -> None:
        if self.source == self.destination:
            raise ValueError(
                f"Query {self.id!r} has identical source and destination "
                f"{self.source!r}"
            )
        if not self.depart >= 0:
            raise ValueError(
                f"Query {self.id!r} departs before the time origin "
                f"({self.depart})"
            )


class Hop(NamedTuple):
    """The traversal of one edge by a vehicle"""

    edge_id: EdgeId
    tail: NodeId
    head: NodeId
    entry_time: float
    exit_time: float

    def cells(self) -> Iterator[Cell]:
        """The ``(edge, interval)`` cells occupied during this traversal"""
        for interval in range(
            math.floor(self.entry_time), math.floor(self.exit_time) + 1
        ):
            yield (self.edge_id, interval)


@dataclass
class Path:
    """A time-annotated route answering one query

    Args:
        query_id: The query this path answers.
        hops: The traversed edges in order. The entry time of every hop equals
            the exit time of the previous one.
        depart: The departure time.
        free_flow_cost: The free-flow travel time ``|φ|`` of the query, the
            reference for its congestion penalty.
    """

    query_id: QueryId
    hops: Tuple[Hop, ...]
    depart: float
    free_flow_cost: float

    def __post_init__(self) -> None:
        if not self.hops:
            raise ValueError(f"The path of query {self.query_id!r} is empty")
        previous = None
        expected = self.depart
        for hop in self.hops:
            if previous is not None and hop.tail != previous.head:
                raise ValueError(
                    f"The path of query {self.query_id!r} is not connected at "
                    f"edge {hop.edge_id!r}"
                )
            if abs(hop.entry_time - expected) > TIME_TOL:
                raise ValueError(
                    f"The path of query {self.query_id!r} enters edge "
                    f"{hop.edge_id!r} at {hop.entry_time}, expected {expected}"
                )
            if not hop.exit_time > hop.entry_time:
                raise ValueError(
                    f"Edge {hop.edge_id!r} is left before it is entered"
                )
            previous = hop
            expected = hop.exit_time

    @property
    def source(self) -> NodeId:
        return self.hops[0].tail

    @property
    def destination(self) -> NodeId:
        return self.hops[-1].head

    @property
    def total_arrival(self) -> float:
        """The arrival time ``a_sdt`` at the destination"""
        return self.hops[-1].exit_time

    @property
    def duration(self) -> float:
        return self.total_arrival - self.depart

    @property
    def penalty(self) -> float:
        """The congestion penalty: duration minus the free-flow duration"""
        return self.duration - self.free_flow_cost

    @property
    def free_flow_arrival(self) -> float:
        return self.depart + self.free_flow_cost

    @property
    def edge_ids(self) -> Tuple[EdgeId, ...]:
        return tuple(hop.edge_id for hop in self.hops)

    @property
    def nodes(self) -> Tuple[NodeId, ...]:
        return (self.hops[0].tail,) + tuple(hop.head for hop in self.hops)

    def cells(self) -> Iterator[Cell]:
        for hop in self.hops:
            yield from hop.cells()
