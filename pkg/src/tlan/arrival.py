# -*- coding: utf-8 -*-
"""
The load-dependent arrival-time function. A vehicle that reaches the tail of
an edge at time ``a`` (in interval units, inside interval ``τ = floor(a)``)
leaves the edge at::

    τ + (a - τ) ** ε + Υ

where ``Υ`` is the free-flow traversal time and the delay exponent ``ε``
depends on the load ``l`` recorded for the edge in interval ``τ`` and the
capacity ``F``: ``ε = 1`` when ``l <= F`` and ``min(1, 1 / (l - F))``
otherwise. The delay term lies in ``[0, 1)`` so that an arrival late in one
interval can never overtake an arrival in the next one (first-in-first-out).

Scalar versions of these functions are used by the routers, and ``jax``
versions are provided for evaluating many traversals at once.
"""

from __future__ import annotations

__all__ = [
    "ArrivalQuery",
    "delay_exponent",
    "exit_time",
    "arrival_time",
    "traverse",
    "delay_exponents",
    "arrival_times",
    "arrival_curve",
]

import math
from typing import TYPE_CHECKING, NamedTuple, Sequence

import jax
import jax.numpy as jnp
import numpy as np
import pandas as pd

from tlan.errors import HorizonOverflowError
from tlan.helpers import EdgeId

if TYPE_CHECKING:
    from tlan.network.graph import EdgeAttrs
    from tlan.state import LoadView


class ArrivalQuery(NamedTuple):
    """A request to traverse one edge

    Args:
        edge_id: The edge to traverse.
        arrival_at_tail: The time ``a_i`` at which the vehicle reaches the
            tail of the edge.
        include_self: If ``True``, the traversing vehicle counts towards the
            load that sets the delay exponent.
    """

    edge_id: EdgeId
    arrival_at_tail: float
    include_self: bool = False


def delay_exponent(load: float, capacity: float) -> float:
    if load <= capacity:
        return 1.0
    return min(1.0, 1.0 / (load - capacity))


def exit_time(
    entry: float, load: float, capacity: float, min_travel_time: float
) -> float:
    """Evaluate the arrival-time function for a known load"""
    if load <= capacity:
        return entry + min_travel_time
    tau = math.floor(entry)
    offset = entry - tau
    return tau + offset ** delay_exponent(load, capacity) + min_travel_time


def traverse(
    loads: "LoadView",
    edge_id: EdgeId,
    attrs: "EdgeAttrs",
    entry: float,
    *,
    include_self: bool = False,
) -> float:
    """The time at which a vehicle entering ``edge_id`` at ``entry`` leaves it

    Raises:
        HorizonOverflowError: If the traversal starts or ends at or beyond the
            horizon of ``loads``.
    """
    horizon = loads.horizon
    if entry < 0:
        raise ValueError(f"Entry times must be non-negative; got {entry}")
    if entry >= horizon:
        raise HorizonOverflowError(
            f"Edge {edge_id!r} entered at {entry:.6f}, beyond the horizon "
            f"{horizon}"
        )
    load = loads.load(edge_id, math.floor(entry))
    if include_self:
        load += 1
    result = exit_time(
        entry, load, attrs.free_flow_capacity, attrs.min_travel_time
    )
    if result >= horizon:
        raise HorizonOverflowError(
            f"Edge {edge_id!r} would be left at {result:.6f}, beyond the "
            f"horizon {horizon}"
        )
    return result


def arrival_time(
    elm: "LoadView", q: ArrivalQuery, attrs: "EdgeAttrs"
) -> float:
    """The arrival time ``a_j`` at the head of an edge

    The delay exponent is evaluated from the load recorded for the edge in
    the entry interval ``floor(q.arrival_at_tail)``, excluding the traversing
    vehicle unless ``q.include_self`` is set.
    """
    return traverse(
        elm,
        q.edge_id,
        attrs,
        q.arrival_at_tail,
        include_self=q.include_self,
    )


@jax.jit
def delay_exponents(load: jnp.ndarray, capacity: jnp.ndarray) -> jnp.ndarray:
    """Vectorized :func:`delay_exponent`"""
    excess = jnp.asarray(load) - jnp.asarray(capacity)
    congested = excess > 0
    safe = jnp.where(congested, excess, 1.0)
    return jnp.where(congested, jnp.minimum(1.0, 1.0 / safe), 1.0)


@jax.jit
def arrival_times(
    entry: jnp.ndarray,
    load: jnp.ndarray,
    capacity: jnp.ndarray,
    min_travel_time: jnp.ndarray,
) -> jnp.ndarray:
    """Vectorized :func:`exit_time`

    All arguments broadcast against each other; ``load`` is the load in the
    entry interval of each traversal.
    """
    entry = jnp.asarray(entry)
    tau = jnp.floor(entry)
    eps = delay_exponents(load, capacity)
    return tau + (entry - tau) ** eps + min_travel_time


def arrival_curve(
    loads: Sequence[float],
    capacity: float,
    min_travel_time: float,
    *,
    intervals: int = 2,
    resolution: int = 100,
) -> pd.DataFrame:
    """Tabulate the arrival time against the entry time for several loads

    Each load is applied to every interval. The table has the columns
    ``load``, ``entry_time`` and ``arrival_time`` (all times in interval
    units) and is ready for plotting.
    """
    if resolution < 1 or intervals < 1:
        raise ValueError("intervals and resolution must be positive")
    entry = np.arange(intervals * resolution) / resolution
    load_grid, entry_grid = np.meshgrid(
        np.asarray(loads, dtype=float), entry, indexing="ij"
    )
    arrival = arrival_times(
        jnp.asarray(entry_grid),
        jnp.asarray(load_grid),
        capacity,
        min_travel_time,
    )
    return pd.DataFrame(
        {
            "load": load_grid.ravel(),
            "entry_time": entry_grid.ravel(),
            "arrival_time": np.asarray(arrival).ravel(),
        }
    )
