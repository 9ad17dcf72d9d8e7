# -*- coding: utf-8 -*-
"""
The edge-load matrix (ELM) records, for every edge and discrete time
interval, how many planned vehicles occupy the edge. It is the shared
mutable state that the load-aware routers read and the planners write.

A vehicle traversing an edge from ``a_i`` to ``a_j`` occupies every interval
``τ`` with ``floor(a_i) <= τ <= floor(a_j)``.

The matrix follows a single-writer contract: one owner mutates it, while any
number of readers use the read-only views returned by
:meth:`EdgeLoadMatrix.view` and :func:`snapshot_at`. Views are cheap and do
not copy; the owner must not mutate the matrix while they are in use. Use
:meth:`EdgeLoadMatrix.copy` for an independent copy.
"""

from __future__ import annotations

__all__ = [
    "LoadView",
    "EdgeLoadMatrix",
    "FrozenLoadView",
    "StaticLoadView",
    "add_path_load",
    "remove_path_load",
    "snapshot_at",
    "read_elm_csv",
    "write_elm_csv",
]

import logging
import math
from abc import ABCMeta, abstractmethod
from pathlib import Path
from types import MappingProxyType
from typing import TYPE_CHECKING, Any, Dict, Iterator, Mapping, Optional, Union

import pandas as pd

from tlan.errors import HorizonOverflowError, LoadUnderflowError
from tlan.helpers import Cell, EdgeId
from tlan.network.io import coerce_ids

if TYPE_CHECKING:
    from tlan.routing.types import Path as RoutePath

logger = logging.getLogger(__name__)


class LoadView(metaclass=ABCMeta):
    """An abstract base class for anything that can report edge loads"""

    @property
    @abstractmethod
    def horizon(self) -> int:
        """The number of tracked intervals ``T``"""
        raise NotImplementedError

    @abstractmethod
    def load(self, edge_id: EdgeId, interval: int) -> int:
        """The load of ``edge_id`` during ``interval``"""
        raise NotImplementedError


def _spanned(entry: float, exit: float) -> range:
    return range(math.floor(entry), math.floor(exit) + 1)


class EdgeLoadMatrix(LoadView):
    """A sparse, mutable edge-load matrix

    Args:
        horizon: The number of tracked intervals ``T``.
        background: An optional frozen matrix of uncontrolled load. Its values
            are added to every read but it is never modified.
    """

    def __init__(
        self,
        horizon: int,
        *,
        background: Optional["EdgeLoadMatrix"] = None,
    ):
        if int(horizon) != horizon or horizon < 1:
            raise ValueError(
                f"horizon must be a positive integer; got {horizon}"
            )
        if background is not None and not background.frozen:
            raise ValueError("The background load matrix must be frozen")
        self._horizon = int(horizon)
        self._cells: Dict[Cell, int] = {}
        self._background = background
        self._frozen = False

    @property
    def horizon(self) -> int:
        return self._horizon

    @property
    def background(self) -> Optional["EdgeLoadMatrix"]:
        return self._background

    @property
    def frozen(self) -> bool:
        return self._frozen

    def freeze(self) -> "EdgeLoadMatrix":
        """Make this matrix permanently read-only and return it"""
        self._frozen = True
        return self

    def load(self, edge_id: EdgeId, interval: int) -> int:
        value = self._cells.get((edge_id, interval), 0)
        if self._background is not None:
            value += self._background.load(edge_id, interval)
        return value

    def controlled_load(self, edge_id: EdgeId, interval: int) -> int:
        """The load excluding the background"""
        return self._cells.get((edge_id, interval), 0)

    def cells(self) -> Mapping[Cell, int]:
        """The non-zero controlled cells as a read-only mapping"""
        return MappingProxyType(self._cells)

    def total_cells(self) -> Dict[Cell, int]:
        """The non-zero cells of the controlled plus background load"""
        total = dict(self._cells)
        if self._background is not None:
            for cell, value in self._background.total_cells().items():
                total[cell] = total.get(cell, 0) + value
        return total

    @property
    def mass(self) -> int:
        """The sum of all controlled loads"""
        return sum(self._cells.values())

    def __len__(self) -> int:
        return len(self._cells)

    def __iter__(self) -> Iterator[Cell]:
        return iter(self._cells)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, EdgeLoadMatrix):
            return NotImplemented
        return (
            self._horizon == other._horizon
            and self._cells == other._cells
            and self._background == other._background
        )

    def _check_writable(self) -> None:
        if self._frozen:
            raise RuntimeError("This edge-load matrix is frozen")

    def set_load(self, edge_id: EdgeId, interval: int, load: int) -> None:
        self._check_writable()
        if not 0 <= interval < self._horizon:
            raise HorizonOverflowError(
                f"Interval {interval} is outside the horizon {self._horizon}"
            )
        if load < 0 or int(load) != load:
            raise ValueError(
                f"Loads must be non-negative integers; got {load}"
            )
        if load == 0:
            self._cells.pop((edge_id, interval), None)
        else:
            self._cells[(edge_id, interval)] = int(load)

    def _span(self, edge_id: EdgeId, entry: float, exit: float) -> range:
        span = _spanned(entry, exit)
        if span.start < 0 or span.stop > self._horizon:
            raise HorizonOverflowError(
                f"Traversal of edge {edge_id!r} over [{entry}, {exit}] leaves "
                f"the horizon {self._horizon}"
            )
        return span

    def add_hop(
        self, edge_id: EdgeId, entry: float, exit: float, count: int = 1
    ) -> None:
        """Record ``count`` vehicles on ``edge_id`` between entry and exit"""
        self._check_writable()
        for interval in self._span(edge_id, entry, exit):
            key = (edge_id, interval)
            self._cells[key] = self._cells.get(key, 0) + count

    def add_path(self, path: "RoutePath") -> None:
        """Record the occupancy of every hop of ``path``

        The matrix is left unchanged if any hop leaves the horizon.
        """
        self._check_writable()
        spans = [
            (
                hop.edge_id,
                self._span(hop.edge_id, hop.entry_time, hop.exit_time),
            )
            for hop in path.hops
        ]
        for edge_id, span in spans:
            for interval in span:
                key = (edge_id, interval)
                self._cells[key] = self._cells.get(key, 0) + 1

    def remove_path(self, path: "RoutePath") -> None:
        """Exactly undo :meth:`add_path`

        Raises:
            LoadUnderflowError: If any cell would become negative; the matrix
                is left unchanged in that case.
        """
        self._check_writable()
        needed: Dict[Cell, int] = {}
        for hop in path.hops:
            for interval in _spanned(hop.entry_time, hop.exit_time):
                key = (hop.edge_id, interval)
                needed[key] = needed.get(key, 0) + 1
        for key, count in needed.items():
            if self._cells.get(key, 0) < count:
                raise LoadUnderflowError(
                    f"Removing path of query {path.query_id!r} would make the "
                    f"load of edge {key[0]!r} in interval {key[1]} negative"
                )
        for key, count in needed.items():
            remaining = self._cells[key] - count
            if remaining:
                self._cells[key] = remaining
            else:
                del self._cells[key]

    def copy(self) -> "EdgeLoadMatrix":
        """An unfrozen copy sharing the same background"""
        other = EdgeLoadMatrix(self._horizon, background=self._background)
        other._cells = dict(self._cells)
        return other

    def view(self) -> "FrozenLoadView":
        """A cheap read-only view of the current loads"""
        return FrozenLoadView(
            self._horizon, MappingProxyType(self._cells), self._background
        )

    def snapshot_at(self, interval: int) -> "StaticLoadView":
        return snapshot_at(self, interval)

    def to_frame(self, *, include_background: bool = False) -> pd.DataFrame:
        """The non-zero cells as a table ``edge_id, interval, load``"""
        cells = self.total_cells() if include_background else self._cells
        rows = sorted(
            ((e, t, v) for (e, t), v in cells.items() if v),
            key=lambda r: (r[0], r[1]),
        )
        return pd.DataFrame(rows, columns=["edge_id", "interval", "load"])

    @classmethod
    def from_frame(
        cls, df: pd.DataFrame, horizon: int
    ) -> "EdgeLoadMatrix":
        elm = cls(horizon)
        for row in df.itertuples(index=False):
            elm.set_load(row.edge_id, int(row.interval), int(row.load))
        return elm


class FrozenLoadView(LoadView):
    """A read-only view of an :class:`EdgeLoadMatrix`"""

    def __init__(
        self,
        horizon: int,
        cells: Mapping[Cell, int],
        background: Optional[EdgeLoadMatrix] = None,
    ):
        self._horizon = horizon
        self._cells = cells
        self._background = background

    @property
    def horizon(self) -> int:
        return self._horizon

    def load(self, edge_id: EdgeId, interval: int) -> int:
        value = self._cells.get((edge_id, interval), 0)
        if self._background is not None:
            value += self._background.load(edge_id, interval)
        return value


class StaticLoadView(LoadView):
    """A view that extrapolates the loads of one interval to all intervals"""

    def __init__(self, source: LoadView, interval: int):
        self._source = source
        self.interval = int(interval)

    @property
    def horizon(self) -> int:
        return self._source.horizon

    def load(self, edge_id: EdgeId, interval: int) -> int:
        return self._source.load(edge_id, self.interval)


def add_path_load(elm: EdgeLoadMatrix, path: "RoutePath") -> EdgeLoadMatrix:
    """Add the occupancy of ``path`` to ``elm`` and return ``elm``"""
    elm.add_path(path)
    return elm


def remove_path_load(
    elm: EdgeLoadMatrix, path: "RoutePath"
) -> EdgeLoadMatrix:
    elm.remove_path(path)
    return elm


def snapshot_at(elm: LoadView, interval: int) -> StaticLoadView:
    """A time-constant view of the loads recorded at ``interval``

    This is how a planner that only knows the load situation at departure
    time sees the network.
    """
    if not 0 <= interval < elm.horizon:
        raise ValueError(
            f"Interval {interval} is outside the horizon {elm.horizon}"
        )
    if isinstance(elm, EdgeLoadMatrix):
        elm = elm.view()
    return StaticLoadView(elm, interval)


def write_elm_csv(
    elm: EdgeLoadMatrix,
    path: Union[str, Path],
    *,
    include_background: bool = False,
) -> None:
    elm.to_frame(include_background=include_background).to_csv(
        path, index=False
    )


def read_elm_csv(path: Union[str, Path], horizon: int) -> EdgeLoadMatrix:
    """Read an ``edge_id,interval,load`` table back into a matrix"""
    df = pd.read_csv(path, dtype=str, keep_default_na=False)
    ids = coerce_ids(df["edge_id"].str.strip())
    df = df.assign(edge_id=[ids[v.strip()] for v in df["edge_id"]])
    elm = EdgeLoadMatrix.from_frame(df, horizon)
    logger.info("Read %d load cells from %s", len(elm), path)
    return elm
