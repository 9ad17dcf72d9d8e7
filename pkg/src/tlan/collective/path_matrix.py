# -*- coding: utf-8 -*-

from __future__ import annotations

__all__ = ["PathEdgeMatrix", "refresh_candidate_set"]

from collections import defaultdict
from typing import Dict, Iterator, Mapping, Optional, Set

from tlan.helpers import Cell, QueryId
from tlan.routing.types import Path


class PathEdgeMatrix:
    """The cached candidate paths of a batch, indexed by occupied cell

    ``self.index[(edge, interval)]`` holds the ids of every candidate whose
    cached path occupies that cell, and ``self.paths`` maps ids back to their
    paths. Both views are kept consistent by :meth:`put` and :meth:`discard`.
    """

    def __init__(self) -> None:
        self._paths: Dict[QueryId, Path] = {}
        self._index: Dict[Cell, Set[QueryId]] = defaultdict(set)

    @property
    def paths(self) -> Mapping[QueryId, Path]:
        return self._paths

    def cells_of(self, query_id: QueryId) -> Set[Cell]:
        return set(self._paths[query_id].cells())

    def queries_at(self, cell: Cell) -> Set[QueryId]:
        return set(self._index.get(cell, ()))

    def get(self, query_id: QueryId) -> Optional[Path]:
        return self._paths.get(query_id)

    def put(self, query_id: QueryId, path: Path) -> None:
        """Cache ``path`` for ``query_id``, replacing any previous path"""
        self.discard(query_id)
        self._paths[query_id] = path
        for cell in path.cells():
            self._index[cell].add(query_id)

    def discard(self, query_id: QueryId) -> None:
        path = self._paths.pop(query_id, None)
        if path is None:
            return
        for cell in path.cells():
            ids = self._index.get(cell)
            if ids is None:
                continue
            ids.discard(query_id)
            if not ids:
                del self._index[cell]

    def intersecting(self, path: Path) -> Set[QueryId]:
        """The ids of cached paths sharing at least one cell with ``path``"""
        hits: Set[QueryId] = set()
        for cell in path.cells():
            hits.update(self._index.get(cell, ()))
        return hits

    def __contains__(self, query_id: QueryId) -> bool:
        return query_id in self._paths

    def __len__(self) -> int:
        return len(self._paths)

    def __iter__(self) -> Iterator[QueryId]:
        return iter(self._paths)


def refresh_candidate_set(
    pem: PathEdgeMatrix, assigned: Path
) -> Set[QueryId]:
    """The cached candidates that must be re-planned after ``assigned``

    Only candidates whose cached path shares an ``(edge, interval)`` cell
    with the newly assigned path can see a different load; the rest keep
    their cached paths and arrivals. The assigned query itself is excluded.
    """
    return pem.intersecting(assigned) - {assigned.query_id}
