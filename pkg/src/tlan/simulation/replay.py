# -*- coding: utf-8 -*-
"""
Ground-truth replay of planned routes. Every vehicle follows its planned edge
sequence, but its timing is recomputed from the loads that the replayed
vehicles themselves create, so planners are compared on what actually
happens rather than on what they predicted.
"""

from __future__ import annotations

__all__ = [
    "ReplayEntry",
    "ReplayResult",
    "REPLAY_ORDERS",
    "replay_assignment",
    "apply_control_factor",
]

import heapq
import logging
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from tlan.arrival import traverse
from tlan.errors import HorizonOverflowError
from tlan.helpers import EdgeId, QueryId
from tlan.network.graph import RoadNetwork
from tlan.routing.types import Hop, Path, Query
from tlan.state import EdgeLoadMatrix

logger = logging.getLogger(__name__)

REPLAY_ORDERS = ("chronological", "assignment")


class ReplayEntry(NamedTuple):
    """A vehicle to replay: its query, fixed route and free-flow cost"""

    query: Query
    edge_ids: Tuple[EdgeId, ...]
    free_flow_cost: float
    runtime: float = 0.0

    @classmethod
    def from_path(cls, q: Query, path: Path, runtime: float = 0.0):
        return cls(q, path.edge_ids, path.free_flow_cost, runtime)


class ReplayResult(NamedTuple):
    """The actual outcome of a set of routes

    Attributes:
        paths: The re-timed path of every vehicle that finished in time.
        elm: The ground-truth loads, including partial loads of dropped
            vehicles and the background.
        penalties: The congestion penalty of every finished vehicle, in
            interval units.
        runtimes: The planning time of every finished vehicle, in seconds.
        dropped: The ids of vehicles that did not finish within the horizon.
    """

    paths: Dict[QueryId, Path]
    elm: EdgeLoadMatrix
    penalties: Dict[QueryId, float]
    runtimes: Dict[QueryId, float]
    dropped: Tuple[QueryId, ...]


def replay_assignment(
    net: RoadNetwork,
    entries: Sequence[ReplayEntry],
    *,
    background: Optional[EdgeLoadMatrix] = None,
    order: str = "chronological",
) -> ReplayResult:
    """Re-time a set of fixed routes under the loads they create together

    With ``order="chronological"`` the replay is event driven: the vehicle
    with the earliest pending edge entry moves next (ties by query id), so a
    vehicle only sees loads of vehicles that entered edges before it did.
    With ``order="assignment"`` vehicles are re-timed one after the other in
    the order of ``entries``, each seeing every earlier vehicle's complete
    route; this reproduces the predictions of the load-aware planners.

    A vehicle that would leave the horizon is dropped; the loads it created
    up to that point are kept.
    """
    if order not in REPLAY_ORDERS:
        raise ValueError(
            f"Unknown replay order {order!r}; expected one of {REPLAY_ORDERS}"
        )
    elm = EdgeLoadMatrix(net.horizon, background=background)
    hops: Dict[QueryId, List[Hop]] = {e.query.id: [] for e in entries}
    if len(hops) != len(entries):
        raise ValueError("Replay entries must have unique query ids")
    dropped: List[QueryId] = []

    def step(entry: ReplayEntry, index: int, entry_time: float) -> float:
        eid = entry.edge_ids[index]
        edge = net.edge(eid)
        exit_time = traverse(elm, eid, edge.attrs, entry_time)
        elm.add_hop(eid, entry_time, exit_time)
        hops[entry.query.id].append(
            Hop(eid, edge.src, edge.dst, entry_time, exit_time)
        )
        return exit_time

    if order == "chronological":
        ranked = sorted(
            range(len(entries)),
            key=lambda i: (
                type(entries[i].query.id).__name__,
                entries[i].query.id,
            ),
        )
        rank = {i: r for r, i in enumerate(ranked)}
        heap = [(e.query.depart, rank[i], i, 0) for i, e in enumerate(entries)]
        heapq.heapify(heap)
        while heap:
            t, _, i, index = heapq.heappop(heap)
            entry = entries[i]
            try:
                exit_time = step(entry, index, t)
            except HorizonOverflowError:
                dropped.append(entry.query.id)
                continue
            if index + 1 < len(entry.edge_ids):
                heapq.heappush(heap, (exit_time, rank[i], i, index + 1))
    else:
        for entry in entries:
            t = entry.query.depart
            try:
                for index in range(len(entry.edge_ids)):
                    t = step(entry, index, t)
            except HorizonOverflowError:
                dropped.append(entry.query.id)

    paths: Dict[QueryId, Path] = {}
    penalties: Dict[QueryId, float] = {}
    runtimes: Dict[QueryId, float] = {}
    lost = set(dropped)
    for entry in entries:
        qid = entry.query.id
        if qid in lost:
            continue
        path = Path(
            query_id=qid,
            hops=tuple(hops[qid]),
            depart=entry.query.depart,
            free_flow_cost=entry.free_flow_cost,
        )
        paths[qid] = path
        penalties[qid] = path.penalty
        runtimes[qid] = entry.runtime
    if dropped:
        logger.warning(
            "%d vehicles left the horizon and were dropped", len(dropped)
        )
    return ReplayResult(
        paths=paths,
        elm=elm,
        penalties=penalties,
        runtimes=runtimes,
        dropped=tuple(dropped),
    )


def apply_control_factor(
    base_elm: EdgeLoadMatrix, gamma: float
) -> EdgeLoadMatrix:
    """The uncontrolled share of a base load as a frozen background matrix

    Every cell becomes ``round(load * (1 - gamma))``, rounding halves up.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must be in [0, 1]; got {gamma}")
    cells = base_elm.total_cells()
    background = EdgeLoadMatrix(base_elm.horizon)
    if cells:
        keys = list(cells)
        loads = np.array([cells[k] for k in keys], dtype=float)
        reduced = np.floor(loads * (1.0 - gamma) + 0.5).astype(int)
        for (edge_id, interval), value in zip(keys, reduced):
            if value:
                background.set_load(edge_id, interval, int(value))
    return background.freeze()
