# -*- coding: utf-8 -*-
"""
Reading and writing road networks. Two layouts are supported:

* a CSV pair: ``<name>.csv`` with the header
  ``edge_id,src,dst,length_m,speed_mps[,capacity]`` and an optional sibling
  ``<name>.nodes.csv`` with the header ``node_id[,x,y]``; when the nodes file
  is missing the nodes are taken from the edge endpoints, and
* a single JSON document ``{"nodes": [...], "edges": [...], "config": {...}}``.
"""

from __future__ import annotations

__all__ = ["load_network", "save_network", "nodes_path", "coerce_ids"]

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import pandas as pd

from tlan.errors import DanglingEndpointError, NetworkFormatError
from tlan.helpers import EdgeId, NodeId
from tlan.network.config import NetworkConfig
from tlan.network.graph import Edge, EdgeAttrs, RoadNetwork

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_EDGE_COLUMNS = ("edge_id", "src", "dst", "length_m", "speed_mps")
_INT_PATTERN = re.compile(r"^-?\d+$")


def nodes_path(path: PathLike) -> Path:
    """The sibling nodes file of an edge CSV file"""
    path = Path(path)
    return path.with_name(f"{path.stem}.nodes.csv")


def coerce_ids(values: Iterable[str]) -> Dict[str, Any]:
    """Map identifier strings to ints when every one of them is an integer"""
    values = list(values)
    if values and all(_INT_PATTERN.match(v) for v in values):
        return {v: int(v) for v in values}
    return {v: v for v in values}


def load_network(
    path: PathLike, cfg: Optional[NetworkConfig] = None
) -> RoadNetwork:
    """Load a road network from a CSV or JSON file

    Args:
        path: The edge CSV file or the JSON document.
        cfg: The configuration used to derive edge attributes. For JSON
            documents this overrides the embedded ``config`` object; when
            neither is given the defaults of :class:`NetworkConfig` are used.

    Raises:
        NetworkFormatError: If the file cannot be parsed, an attribute is not
            positive or a directed edge is duplicated.
        DanglingEndpointError: If an edge references an unknown node.
    """
    path = Path(path)
    if path.suffix.lower() == ".json":
        net = _load_json(path, cfg)
    else:
        net = _load_csv(path, cfg)
    logger.info(
        "Loaded %s: %d nodes, %d edges", path, net.num_nodes, net.num_edges
    )
    return net


def _read_table(path: Path, required: Sequence[str]) -> pd.DataFrame:
    try:
        df = pd.read_csv(
            path,
            dtype=str,
            keep_default_na=False,
            skipinitialspace=True,
            encoding="utf-8",
        )
    except pd.errors.ParserError as e:
        raise NetworkFormatError(str(e), path=path) from e
    except pd.errors.EmptyDataError as e:
        raise NetworkFormatError("file is empty", path=path, line=1) from e
    df.columns = [c.strip() for c in df.columns]
    missing = [c for c in required if c not in df.columns]
    if missing:
        raise NetworkFormatError(
            f"missing column(s) {', '.join(missing)}", path=path, line=1
        )
    return df


def _number(value: str, name: str, path: Path, line: int) -> float:
    try:
        return float(value)
    except ValueError:
        raise NetworkFormatError(
            f"could not parse {name}={value!r} as a number",
            path=path,
            line=line,
        ) from None


def _load_csv(path: Path, cfg: Optional[NetworkConfig]) -> RoadNetwork:
    cfg = NetworkConfig() if cfg is None else cfg
    edges_df = _read_table(path, _EDGE_COLUMNS)
    sibling = nodes_path(path)
    nodes_df = (
        _read_table(sibling, ("node_id",)) if sibling.exists() else None
    )

    raw_nodes: List[str] = []
    if nodes_df is not None:
        raw_nodes = [v.strip() for v in nodes_df["node_id"]]
    endpoints = [v.strip() for v in edges_df["src"]] + [
        v.strip() for v in edges_df["dst"]
    ]
    node_map = coerce_ids(raw_nodes + endpoints)
    edge_map = coerce_ids(v.strip() for v in edges_df["edge_id"])

    positions: Dict[NodeId, Tuple[float, float]] = {}
    if nodes_df is not None:
        nodes: List[NodeId] = []
        seen_nodes = set()
        has_xy = "x" in nodes_df.columns and "y" in nodes_df.columns
        for idx, row in enumerate(nodes_df.itertuples(index=False)):
            line = idx + 2
            node = node_map[row.node_id.strip()]
            if node in seen_nodes:
                raise NetworkFormatError(
                    f"duplicate node id {node!r}", path=sibling, line=line
                )
            seen_nodes.add(node)
            nodes.append(node)
            if has_xy and row.x != "" and row.y != "":
                positions[node] = (
                    _number(row.x, "x", sibling, line),
                    _number(row.y, "y", sibling, line),
                )
        known = set(nodes)
    else:
        nodes = list(dict.fromkeys(node_map[v] for v in endpoints))
        known = set(nodes)

    has_capacity = "capacity" in edges_df.columns
    edges: List[Edge] = []
    seen_ids: Dict[EdgeId, int] = {}
    seen_pairs: Dict[Tuple[NodeId, NodeId], int] = {}
    for idx, row in enumerate(edges_df.itertuples(index=False)):
        line = idx + 2
        eid = edge_map[row.edge_id.strip()]
        src = node_map[row.src.strip()]
        dst = node_map[row.dst.strip()]
        for endpoint in (src, dst):
            if endpoint not in known:
                raise DanglingEndpointError(
                    f"edge {eid!r} references unknown node {endpoint!r}",
                    path=path,
                    line=line,
                )
        if src == dst:
            raise NetworkFormatError(
                f"edge {eid!r} is a self-loop", path=path, line=line
            )
        if eid in seen_ids:
            raise NetworkFormatError(
                f"duplicate edge id {eid!r} (first on line {seen_ids[eid]})",
                path=path,
                line=line,
            )
        if (src, dst) in seen_pairs:
            raise NetworkFormatError(
                f"duplicate directed edge {src!r}->{dst!r} "
                f"(first on line {seen_pairs[(src, dst)]})",
                path=path,
                line=line,
            )
        seen_ids[eid] = line
        seen_pairs[(src, dst)] = line
        capacity = None
        if has_capacity and row.capacity.strip() != "":
            capacity = _number(row.capacity, "capacity", path, line)
        length = _number(row.length_m, "length_m", path, line)
        speed = _number(row.speed_mps, "speed_mps", path, line)
        try:
            attrs = EdgeAttrs.derive(length, speed, cfg, capacity=capacity)
        except ValueError as e:
            raise NetworkFormatError(str(e), path=path, line=line) from e
        edges.append(Edge(eid, src, dst, attrs))

    return RoadNetwork(nodes, edges, cfg, positions=positions)


def _load_json(path: Path, cfg: Optional[NetworkConfig]) -> RoadNetwork:
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise NetworkFormatError(e.msg, path=path, line=e.lineno) from e
    if not isinstance(doc, dict) or "edges" not in doc:
        raise NetworkFormatError("expected an object with 'edges'", path=path)
    if cfg is None:
        try:
            cfg = NetworkConfig.from_dict(doc.get("config", {}))
        except (TypeError, ValueError) as e:
            raise NetworkFormatError(f"invalid config: {e}", path=path) from e

    positions: Dict[NodeId, Tuple[float, float]] = {}
    if "nodes" in doc:
        nodes = []
        for entry in doc["nodes"]:
            node = entry["id"] if isinstance(entry, dict) else entry
            nodes.append(node)
            if isinstance(entry, dict) and "x" in entry and "y" in entry:
                positions[node] = (float(entry["x"]), float(entry["y"]))
    else:
        try:
            nodes = list(
                dict.fromkeys(
                    v for e in doc["edges"] for v in (e["src"], e["dst"])
                )
            )
        except (KeyError, TypeError) as e:
            raise NetworkFormatError(
                f"edge without endpoint: {e}", path=path
            ) from e
    known = set(nodes)
    if len(known) != len(nodes):
        raise NetworkFormatError("duplicate node ids", path=path)

    edges: List[Edge] = []
    pairs = set()
    ids = set()
    for idx, entry in enumerate(doc["edges"]):
        where = f"edge #{idx}"
        try:
            eid, src, dst = entry["id"], entry["src"], entry["dst"]
            length, speed = entry["length_m"], entry["speed_mps"]
        except (KeyError, TypeError) as e:
            raise NetworkFormatError(
                f"{where}: missing field {e}", path=path
            ) from e
        for endpoint in (src, dst):
            if endpoint not in known:
                raise DanglingEndpointError(
                    f"{where}: edge {eid!r} references unknown node "
                    f"{endpoint!r}",
                    path=path,
                )
        if eid in ids or (src, dst) in pairs or src == dst:
            raise NetworkFormatError(
                f"{where}: duplicate or self-loop edge {eid!r}", path=path
            )
        ids.add(eid)
        pairs.add((src, dst))
        try:
            attrs = EdgeAttrs.derive(
                length,
                speed,
                cfg,
                capacity=entry.get("capacity"),
                min_travel_time=entry.get("min_travel_time"),
            )
        except (TypeError, ValueError) as e:
            raise NetworkFormatError(f"{where}: {e}", path=path) from e
        edges.append(Edge(eid, src, dst, attrs))
    return RoadNetwork(nodes, edges, cfg, positions=positions)


def save_network(net: RoadNetwork, path: PathLike) -> List[Path]:
    """Write a network to disk and return the written files

    Edge capacities are always written explicitly so that loading the file
    reproduces the network exactly. JSON documents also store the minimum
    travel times and the configuration.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix.lower() == ".json":
        doc = {
            "config": net.config.to_dict(),
            "nodes": [_node_entry(net, n) for n in net.node_ids],
            "edges": [
                {
                    "id": e.edge_id,
                    "src": e.src,
                    "dst": e.dst,
                    "length_m": e.attrs.length_m,
                    "speed_mps": e.attrs.speed_limit_mps,
                    "capacity": e.attrs.free_flow_capacity,
                    "min_travel_time": e.attrs.min_travel_time,
                }
                for e in net.edges.values()
            ],
        }
        with open(path, "w", encoding="utf-8") as f:
            json.dump(doc, f, indent=2)
            f.write("\n")
        return [path]

    edges = pd.DataFrame(
        [
            (
                e.edge_id,
                e.src,
                e.dst,
                repr(e.attrs.length_m),
                repr(e.attrs.speed_limit_mps),
                repr(e.attrs.free_flow_capacity),
            )
            for e in net.edges.values()
        ],
        columns=list(_EDGE_COLUMNS) + ["capacity"],
    )
    edges.to_csv(path, index=False)
    nodes = pd.DataFrame(
        [
            (
                n,
                *(
                    (repr(net.positions[n][0]), repr(net.positions[n][1]))
                    if n in net.positions
                    else ("", "")
                ),
            )
            for n in net.node_ids
        ],
        columns=["node_id", "x", "y"],
    )
    sibling = nodes_path(path)
    nodes.to_csv(sibling, index=False)
    return [path, sibling]


def _node_entry(net: RoadNetwork, node: NodeId) -> Dict[str, Any]:
    entry: Dict[str, Any] = {"id": node}
    if node in net.positions:
        entry["x"], entry["y"] = net.positions[node]
    return entry
