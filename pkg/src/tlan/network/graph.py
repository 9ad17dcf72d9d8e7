# -*- coding: utf-8 -*-

from __future__ import annotations

__all__ = [
    "RoadGeometry",
    "EdgeAttrs",
    "Edge",
    "RoadNetwork",
    "compute_free_flow_capacity",
    "compute_min_travel_time",
]

import logging
from types import MappingProxyType
from typing import (
    TYPE_CHECKING,
    Any,
    Dict,
    Iterable,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Tuple,
)

from tlan.helpers import EdgeId, NodeId, dataclass
from tlan.network.config import NetworkConfig

if TYPE_CHECKING:
    import networkx as nx

logger = logging.getLogger(__name__)


class RoadGeometry(NamedTuple):
    """The physical description of a road from which its attributes derive"""

    length_m: float
    speed_limit_mps: float


def _transition_penalty_s(geom: RoadGeometry, cfg: NetworkConfig) -> float:
    return cfg.transition_penalty_factor * geom.length_m / geom.speed_limit_mps


def compute_free_flow_capacity(
    geom: RoadGeometry, cfg: NetworkConfig
) -> float:
    """The number of vehicles that can traverse an edge in one interval

    This evaluates ``F = δ/(z η) + I/(η + ψ)`` with every term in seconds.
    The result is left real-valued.

    Args:
        geom: Any object with ``length_m`` and ``speed_limit_mps`` attributes,
            for example an :class:`EdgeAttrs` or :class:`RoadGeometry`.
        cfg: The network configuration providing ``I``, ``η`` and the
            transition penalty factor.
    """
    _check_geometry(geom)
    psi = _transition_penalty_s(geom, cfg)
    eta = cfg.base_headway_s
    return geom.length_m / (geom.speed_limit_mps * eta) + (
        cfg.interval_length_s / (eta + psi)
    )


def compute_min_travel_time(geom: RoadGeometry, cfg: NetworkConfig) -> float:
    """The free-flow traversal time of an edge in interval units

    The transition penalty is folded into the traversal time.
    """
    _check_geometry(geom)
    free_s = geom.length_m / geom.speed_limit_mps
    return (free_s + _transition_penalty_s(geom, cfg)) / cfg.interval_length_s


def _check_geometry(geom: RoadGeometry) -> None:
    if not geom.length_m > 0:
        raise ValueError(f"length_m must be positive; got {geom.length_m}")
    if not geom.speed_limit_mps > 0:
        raise ValueError(
            f"speed_limit_mps must be positive; got {geom.speed_limit_mps}"
        )


@dataclass
class EdgeAttrs:
    """The attributes of one directed road

    Args:
        length_m: The road length ``δ`` in meters.
        speed_limit_mps: The speed limit ``z`` in meters per second.
        min_travel_time: The free-flow traversal time ``Υ`` in interval
            units, including the transition penalty.
        free_flow_capacity: The free-flow capacity ``F`` in vehicles per
            interval.
    """

    length_m: float
    speed_limit_mps: float
    min_travel_time: float
    free_flow_capacity: float

    def __post_init__(self) -> None:
        _check_geometry(self)  # type: ignore[arg-type]
        if not self.min_travel_time > 0:
            raise ValueError(
                f"min_travel_time must be positive; got {self.min_travel_time}"
            )
        if not self.free_flow_capacity > 0:
            raise ValueError(
                "free_flow_capacity must be positive; "
                f"got {self.free_flow_capacity}"
            )

    @classmethod
    def derive(
        cls,
        length_m: float,
        speed_limit_mps: float,
        cfg: NetworkConfig,
        *,
        capacity: Optional[float] = None,
        min_travel_time: Optional[float] = None,
    ) -> "EdgeAttrs":
        """Build the attributes of a road, deriving whatever is not supplied"""
        geom = RoadGeometry(float(length_m), float(speed_limit_mps))
        if min_travel_time is None:
            min_travel_time = compute_min_travel_time(geom, cfg)
        if capacity is None:
            capacity = compute_free_flow_capacity(geom, cfg)
        return cls(
            length_m=geom.length_m,
            speed_limit_mps=geom.speed_limit_mps,
            min_travel_time=float(min_travel_time),
            free_flow_capacity=float(capacity),
        )


class Edge(NamedTuple):
    edge_id: EdgeId
    src: NodeId
    dst: NodeId
    attrs: EdgeAttrs


class RoadNetwork:
    """An immutable directed road network

    Node and edge identifiers can be any hashable values as long as all the
    identifiers of one kind are mutually orderable (they are used to break
    ties deterministically). There is at most one edge per ordered pair of
    nodes.

    Args:
        nodes: The node identifiers, in order.
        edges: The directed edges of the network.
        config: The time and capacity configuration used to derive the edge
            attributes.
        positions: Optional planar ``(x, y)`` coordinates for the nodes.
    """

    def __init__(
        self,
        nodes: Iterable[NodeId],
        edges: Iterable[Edge],
        config: NetworkConfig,
        *,
        positions: Optional[Mapping[NodeId, Tuple[float, float]]] = None,
    ):
        self._config = config
        node_ids: List[NodeId] = []
        seen = set()
        for node in nodes:
            if node in seen:
                raise ValueError(f"Duplicate node id {node!r}")
            seen.add(node)
            node_ids.append(node)
        self._node_ids = tuple(node_ids)

        edge_map: Dict[EdgeId, Edge] = {}
        pairs: Dict[Tuple[NodeId, NodeId], EdgeId] = {}
        succ: Dict[NodeId, List[Tuple[NodeId, EdgeId]]] = {
            n: [] for n in node_ids
        }
        pred: Dict[NodeId, List[Tuple[NodeId, EdgeId]]] = {
            n: [] for n in node_ids
        }
        for edge in edges:
            if edge.edge_id in edge_map:
                raise ValueError(f"Duplicate edge id {edge.edge_id!r}")
            if edge.src == edge.dst:
                raise ValueError(f"Edge {edge.edge_id!r} is a self-loop")
            for endpoint in (edge.src, edge.dst):
                if endpoint not in seen:
                    raise ValueError(
                        f"Edge {edge.edge_id!r} references unknown node "
                        f"{endpoint!r}"
                    )
            pair = (edge.src, edge.dst)
            if pair in pairs:
                raise ValueError(
                    f"Edges {pairs[pair]!r} and {edge.edge_id!r} both connect "
                    f"{edge.src!r} to {edge.dst!r}"
                )
            pairs[pair] = edge.edge_id
            edge_map[edge.edge_id] = edge
            succ[edge.src].append((edge.dst, edge.edge_id))
            pred[edge.dst].append((edge.src, edge.edge_id))

        self._edges = MappingProxyType(edge_map)
        self._pairs = MappingProxyType(pairs)
        self._succ = MappingProxyType(
            {k: tuple(sorted(v)) for k, v in succ.items()}
        )
        self._pred = MappingProxyType(
            {k: tuple(sorted(v)) for k, v in pred.items()}
        )
        self._positions = MappingProxyType(
            {}
            if positions is None
            else {k: tuple(v) for k, v in positions.items()}
        )
        logger.debug(
            "Built road network with %d nodes and %d edges",
            len(self._node_ids),
            len(edge_map),
        )

    @classmethod
    def from_records(
        cls,
        nodes: Iterable[NodeId],
        records: Iterable[Tuple[EdgeId, NodeId, NodeId, float, float]],
        config: NetworkConfig,
        *,
        capacities: Optional[Mapping[EdgeId, float]] = None,
        positions: Optional[Mapping[NodeId, Tuple[float, float]]] = None,
    ) -> "RoadNetwork":
        """Build a network from ``(edge_id, src, dst, length_m, speed_mps)``

        Edge attributes are derived from the configuration unless an explicit
        capacity is given for an edge in ``capacities``.
        """
        capacities = {} if capacities is None else capacities
        edges = [
            Edge(
                eid,
                src,
                dst,
                EdgeAttrs.derive(
                    length, speed, config, capacity=capacities.get(eid)
                ),
            )
            for eid, src, dst, length, speed in records
        ]
        return cls(nodes, edges, config, positions=positions)

    @property
    def config(self) -> NetworkConfig:
        return self._config

    @property
    def horizon(self) -> int:
        return int(self._config.horizon_intervals)

    @property
    def node_ids(self) -> Tuple[NodeId, ...]:
        return self._node_ids

    @property
    def edges(self) -> Mapping[EdgeId, Edge]:
        return self._edges

    @property
    def positions(self) -> Mapping[NodeId, Tuple[float, float]]:
        return self._positions

    @property
    def num_nodes(self) -> int:
        return len(self._node_ids)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def __reduce__(self) -> Tuple[Any, ...]:
        # Rebuilt from its inputs when sent to worker processes
        return (
            _rebuild_network,
            (
                self._node_ids,
                tuple(self._edges.values()),
                self._config,
                dict(self._positions),
            ),
        )

    def __contains__(self, node: object) -> bool:
        return node in self._succ

    def edge(self, edge_id: EdgeId) -> Edge:
        return self._edges[edge_id]

    def attrs(self, edge_id: EdgeId) -> EdgeAttrs:
        return self._edges[edge_id].attrs

    def successors(self, node: NodeId) -> Tuple[Tuple[NodeId, EdgeId], ...]:
        """Outgoing ``(head, edge_id)`` pairs, sorted by head then edge id"""
        return self._succ[node]

    def predecessors(self, node: NodeId) -> Tuple[Tuple[NodeId, EdgeId], ...]:
        """Incoming ``(tail, edge_id)`` pairs, sorted by tail then edge id"""
        return self._pred[node]

    def edge_between(self, src: NodeId, dst: NodeId) -> Optional[EdgeId]:
        return self._pairs.get((src, dst))

    def replace_config(self, config: NetworkConfig) -> "RoadNetwork":
        """A copy of this network that uses a different horizon or origin

        Only the horizon and time origin may change; the interval length,
        headway and transition penalty are baked into the edge attributes.
        """
        for name in (
            "interval_length_s",
            "base_headway_s",
            "transition_penalty_factor",
        ):
            if getattr(config, name) != getattr(self._config, name):
                raise ValueError(
                    f"Cannot change {name} of an existing network; reload it"
                )
        return RoadNetwork(
            self._node_ids,
            self._edges.values(),
            config,
            positions=self._positions,
        )

    def to_networkx(self) -> "nx.DiGraph":
        """This network as a ``networkx.DiGraph``

        Edge data carry the ``edge_id`` and the free-flow traversal time as
        ``weight``.
        """
        import networkx as nx

        graph = nx.DiGraph()
        for node in self._node_ids:
            if node in self._positions:
                graph.add_node(node, pos=self._positions[node])
            else:
                graph.add_node(node)
        for edge in self._edges.values():
            graph.add_edge(
                edge.src,
                edge.dst,
                edge_id=edge.edge_id,
                weight=edge.attrs.min_travel_time,
                capacity=edge.attrs.free_flow_capacity,
            )
        return graph


def _rebuild_network(
    nodes: Tuple[NodeId, ...],
    edges: Tuple[Edge, ...],
    config: NetworkConfig,
    positions: Dict[NodeId, Tuple[float, float]],
) -> RoadNetwork:
    return RoadNetwork(nodes, edges, config, positions=positions)
