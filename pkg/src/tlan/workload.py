# -*- coding: utf-8 -*-
"""
Query workloads: reading and writing query files, generating seeded synthetic
demand, and caching the free-flow shortest path of every query.

Query files are CSV tables with the header ``query_id,src,dst,depart_s``,
optionally preceded by ``#`` comment lines describing how they were made.
"""

from __future__ import annotations

__all__ = [
    "QuerySet",
    "load_queries",
    "save_queries",
    "generate_queries",
    "precompute_free_flow",
]

import logging
import math
from pathlib import Path as FilePath
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import networkx as nx
import numpy as np
import pandas as pd

from tlan.errors import NoPathError, QueryFormatError
from tlan.helpers import (
    NodeId,
    QueryId,
    dataclass,
    process_pool,
    split_evenly,
)
from tlan.network.graph import RoadNetwork
from tlan.network.io import coerce_ids
from tlan.routing.dijkstra import dijkstra_free_flow
from tlan.routing.types import Path, Query

logger = logging.getLogger(__name__)

PathLike = Union[str, FilePath]

_QUERY_COLUMNS = ("query_id", "src", "dst", "depart_s")


@dataclass
class QuerySet:
    """An ordered set of queries and their free-flow paths

    Args:
        queries: The queries, sorted by departure and then by id.
        depart_s: The departure of every query in seconds, as read or
            generated, so that writing the set back is exact.
        free_flow: The free-flow shortest path of every reachable query,
            filled in by :func:`precompute_free_flow`.
        unreachable: The ids of queries whose destination cannot be reached.
        meta: Generator parameters written as a header comment.
    """

    queries: Tuple[Query, ...]
    depart_s: Mapping[QueryId, float]
    free_flow: Mapping[QueryId, Path]
    unreachable: FrozenSet[QueryId]
    meta: Mapping[str, Any]

    def __post_init__(self) -> None:
        seen = set()
        previous = -math.inf
        for q in self.queries:
            if q.id in seen:
                raise ValueError(f"Duplicate query id {q.id!r}")
            if q.depart < previous:
                raise ValueError("Queries must be sorted by departure")
            seen.add(q.id)
            previous = q.depart

    @classmethod
    def from_queries(
        cls,
        queries: Iterable[Query],
        *,
        depart_s: Optional[Mapping[QueryId, float]] = None,
        meta: Optional[Mapping[str, Any]] = None,
    ) -> "QuerySet":
        ordered = tuple(
            sorted(queries, key=lambda q: (q.depart, _sort_key(q.id)))
        )
        return cls(
            queries=ordered,
            depart_s=dict(depart_s or {}),
            free_flow={},
            unreachable=frozenset(),
            meta=dict(meta or {}),
        )

    @property
    def routable(self) -> List[Query]:
        """The queries whose destination is reachable"""
        return [q for q in self.queries if q.id not in self.unreachable]

    @property
    def free_flow_costs(self) -> Dict[QueryId, float]:
        return {qid: p.free_flow_cost for qid, p in self.free_flow.items()}

    def by_id(self) -> Dict[QueryId, Query]:
        return {q.id: q for q in self.queries}

    def __len__(self) -> int:
        return len(self.queries)

    def __iter__(self) -> Iterator[Query]:
        return iter(self.queries)


def _sort_key(value: Any) -> Tuple[str, Any]:
    # Ids may mix types across files; keep the ordering total
    return (type(value).__name__, value)


def _leading_comments(path: FilePath) -> int:
    count = 0
    with open(path, encoding="utf-8") as f:
        for line in f:
            if not line.startswith("#"):
                break
            count += 1
    return count


def load_queries(path: PathLike, net: RoadNetwork) -> QuerySet:
    """Load a query CSV file

    Departures are converted from seconds to interval units using the
    network configuration.

    Raises:
        QueryFormatError: If a row cannot be parsed, references an unknown
            node, repeats an id, has identical endpoints, or departs outside
            the horizon.
    """
    path = FilePath(path)
    skip = _leading_comments(path)
    try:
        df = pd.read_csv(
            path,
            dtype=str,
            skiprows=skip,
            keep_default_na=False,
            skipinitialspace=True,
            encoding="utf-8",
        )
    except pd.errors.ParserError as e:
        raise QueryFormatError(str(e), path=path) from e
    except pd.errors.EmptyDataError as e:
        raise QueryFormatError(
            "file is empty", path=path, line=skip + 1
        ) from e
    df.columns = [c.strip() for c in df.columns]
    missing = [c for c in _QUERY_COLUMNS if c not in df.columns]
    if missing:
        raise QueryFormatError(
            f"missing column(s) {', '.join(missing)}",
            path=path,
            line=skip + 1,
        )

    ids = coerce_ids(v.strip() for v in df["query_id"])
    node_map = coerce_ids(
        [v.strip() for v in df["src"]] + [v.strip() for v in df["dst"]]
    )
    cfg = net.config
    queries: List[Query] = []
    depart_s: Dict[QueryId, float] = {}
    for idx, row in enumerate(df.itertuples(index=False)):
        line = skip + 2 + idx
        qid = ids[row.query_id.strip()]
        if qid in depart_s:
            raise QueryFormatError(
                f"duplicate query id {qid!r}", path=path, line=line
            )
        src = node_map[row.src.strip()]
        dst = node_map[row.dst.strip()]
        for node in (src, dst):
            if node not in net:
                raise QueryFormatError(
                    f"unknown node {node!r}", path=path, line=line
                )
        try:
            seconds = float(row.depart_s)
        except ValueError:
            raise QueryFormatError(
                f"could not parse depart_s={row.depart_s!r} as a number",
                path=path,
                line=line,
            ) from None
        depart = cfg.to_intervals(seconds)
        if not 0 <= depart < net.horizon:
            raise QueryFormatError(
                f"departure {seconds} s is outside the planning horizon",
                path=path,
                line=line,
            )
        try:
            q = Query(id=qid, source=src, destination=dst, depart=depart)
        except ValueError as e:
            raise QueryFormatError(str(e), path=path, line=line) from None
        queries.append(q)
        depart_s[qid] = seconds

    qs = QuerySet.from_queries(queries, depart_s=depart_s)
    logger.info("Loaded %d queries from %s", len(qs), path)
    return qs


def save_queries(qs: QuerySet, path: PathLike, net: RoadNetwork) -> FilePath:
    """Write a query set as CSV, with its generator parameters as a comment"""
    path = FilePath(path)
    cfg = net.config
    rows = [
        (
            q.id,
            q.source,
            q.destination,
            repr(float(qs.depart_s.get(q.id, cfg.to_seconds(q.depart)))),
        )
        for q in qs.queries
    ]
    df = pd.DataFrame(rows, columns=list(_QUERY_COLUMNS))
    with open(path, "w", encoding="utf-8", newline="") as f:
        if qs.meta:
            header = " ".join(f"{k}={v}" for k, v in qs.meta.items())
            f.write(f"# {header}\n")
        df.to_csv(f, index=False)
    logger.info("Wrote %d queries to %s", len(qs), path)
    return path


def _hotspots(net: RoadNetwork, fraction: float = 0.1) -> List[NodeId]:
    """The nodes closest to the centre of the network"""
    count = max(1, int(round(fraction * net.num_nodes)))
    nodes = list(net.node_ids)
    positions = net.positions
    if positions and all(n in positions for n in nodes):
        xy = np.array([positions[n] for n in nodes], dtype=float)
        dist = np.linalg.norm(xy - xy.mean(axis=0), axis=1)
        order = np.lexsort((np.arange(len(nodes)), dist))
        return [nodes[i] for i in order[:count]]
    closeness = nx.closeness_centrality(net.to_networkx())
    ranked = sorted(
        range(len(nodes)), key=lambda i: (-closeness[nodes[i]], i)
    )
    return [nodes[i] for i in ranked[:count]]


def generate_queries(
    net: RoadNetwork,
    n: int,
    window_s: Tuple[float, float],
    hotspot_bias: float = 0.0,
    seed: int = 0,
) -> QuerySet:
    """Draw a seeded synthetic query set

    Endpoints are drawn uniformly over the nodes. With probability
    ``hotspot_bias`` one of the two endpoints, chosen by a fair coin, is
    drawn from the tenth of the nodes closest to the centre of the network
    instead. Departures are uniform over ``window_s``.

    Args:
        net: The road network.
        n: The number of queries.
        window_s: The ``(start, end)`` of the departure window in seconds.
        hotspot_bias: The fraction of queries touching a hotspot.
        seed: The seed of the random number generator.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1; got {n}")
    if not 0.0 <= hotspot_bias <= 1.0:
        raise ValueError(
            f"hotspot_bias must be in [0, 1]; got {hotspot_bias}"
        )
    if net.num_nodes < 2:
        raise ValueError("Queries need at least two nodes")
    start, end = map(float, window_s)
    cfg = net.config
    if not (
        end >= start
        and cfg.to_intervals(start) >= 0
        and cfg.to_intervals(end) < net.horizon
    ):
        raise ValueError(
            f"The window {window_s} is not inside the planning horizon"
        )

    rng = np.random.default_rng(seed)
    nodes = list(net.node_ids)
    hot = _hotspots(net)

    def draw(pool: Sequence[NodeId]) -> NodeId:
        return pool[int(rng.integers(len(pool)))]

    drawn: List[Tuple[float, NodeId, NodeId]] = []
    for _ in range(n):
        biased = rng.random() < hotspot_bias
        hot_end = int(rng.integers(2)) if biased else -1
        while True:
            src = draw(hot if hot_end == 0 else nodes)
            dst = draw(hot if hot_end == 1 else nodes)
            if src != dst:
                break
        seconds = float(rng.uniform(start, end))
        drawn.append((seconds, src, dst))
    drawn.sort(key=lambda row: row[0])

    queries = []
    depart_s = {}
    for qid, (seconds, src, dst) in enumerate(drawn):
        queries.append(
            Query(
                id=qid,
                source=src,
                destination=dst,
                depart=cfg.to_intervals(seconds),
            )
        )
        depart_s[qid] = seconds
    meta = {
        "seed": seed,
        "n": n,
        "window_s": f"{start:g}-{end:g}",
        "hotspot_bias": hotspot_bias,
    }
    logger.info("Generated %d queries (seed %d)", n, seed)
    return QuerySet.from_queries(queries, depart_s=depart_s, meta=meta)


def _free_flow_or_none(net: RoadNetwork, q: Query) -> Optional[Path]:
    try:
        return dijkstra_free_flow(net, q)
    except NoPathError:
        return None


_WORKER_NET: Dict[str, RoadNetwork] = {}


def _init_free_flow_worker(net: RoadNetwork) -> None:
    _WORKER_NET["net"] = net


def _free_flow_chunk(chunk: Sequence[Query]) -> List[Optional[Path]]:
    net = _WORKER_NET["net"]
    return [_free_flow_or_none(net, q) for q in chunk]


def precompute_free_flow(
    net: RoadNetwork, qs: QuerySet, *, workers: int = 1
) -> QuerySet:
    """Attach the free-flow shortest path of every query

    Queries whose destination cannot be reached are listed in
    ``unreachable``; they are skipped by every planner.
    """
    if workers > 1 and len(qs) > 1:
        chunks = split_evenly(qs.queries, workers)
        with process_pool(
            len(chunks), _init_free_flow_worker, (net,)
        ) as pool:
            paths = [
                path
                for chunk in pool.map(_free_flow_chunk, chunks)
                for path in chunk
            ]
    else:
        paths = [_free_flow_or_none(net, q) for q in qs.queries]
    free_flow = {}
    unreachable = set()
    for q, path in zip(qs.queries, paths):
        if path is None:
            unreachable.add(q.id)
        else:
            free_flow[q.id] = path
    if unreachable:
        logger.warning(
            "%d of %d queries are unreachable", len(unreachable), len(qs)
        )
    return qs.replace(free_flow=free_flow, unreachable=frozenset(unreachable))
