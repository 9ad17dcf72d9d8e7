# -*- coding: utf-8 -*-
"""
Collective batch assignment. Instead of routing queries one by one in order
of departure, the planner repeatedly assigns, among a window of pending
queries, the one that can reach its destination earliest under the current
edge loads, and then updates the loads before choosing again.
"""

from __future__ import annotations

__all__ = [
    "BatchConfig",
    "CollectiveResult",
    "form_batch",
    "is_free_flow_path_congested",
    "define_candidate_set",
    "select_minimal_arrival",
    "cs_mat",
]

import logging
import os
import time
from concurrent.futures import Executor
from itertools import repeat
from typing import (
    Any,
    Dict,
    Iterable,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
)

from tlan.collective.path_matrix import PathEdgeMatrix, refresh_candidate_set
from tlan.collective.predictors import PenaltyPredictor, ZeroPredictor
from tlan.errors import RoutingError
from tlan.helpers import (
    TIME_TOL,
    Cell,
    QueryId,
    dataclass,
    process_pool,
    split_evenly,
)
from tlan.network.graph import RoadNetwork
from tlan.routing.astar import LoadAwareRouter
from tlan.routing.dijkstra import dijkstra_free_flow
from tlan.routing.evaluate import evaluate_path_under_elm
from tlan.routing.router import Router
from tlan.routing.types import Path, Query
from tlan.state import EdgeLoadMatrix, FrozenLoadView, LoadView

logger = logging.getLogger(__name__)


@dataclass
class BatchConfig:
    """Parameters of the collective planner

    Args:
        window_y_s: How far past the earliest pending departure, in seconds,
            the batch reaches.
        max_candidates: The largest number of queries evaluated per
            assignment; ``0`` means no limit.
        parallelism: The number of worker processes evaluating candidates;
            defaults to the number of available cores.
        refresh: Re-plan only candidates whose cached paths intersect the
            latest assignment. Disable to re-plan every candidate each time.
        parallel_min_candidates: The smallest number of candidates to plan
            at once that is handed to the worker processes; smaller sets
            are planned in the calling process.
    """

    window_y_s: float = 14400.0
    max_candidates: int = 0
    parallelism: Optional[int] = None
    refresh: bool = True
    parallel_min_candidates: int = 8

    def __post_init__(self) -> None:
        if not self.window_y_s > 0:
            raise ValueError(
                f"window_y_s must be positive; got {self.window_y_s}"
            )
        if self.max_candidates < 0:
            raise ValueError(
                "max_candidates must be non-negative; got "
                f"{self.max_candidates}"
            )
        if self.parallelism is not None and self.parallelism < 1:
            raise ValueError(
                f"parallelism must be at least 1; got {self.parallelism}"
            )
        if self.parallel_min_candidates < 2:
            raise ValueError(
                "parallel_min_candidates must be at least 2; got "
                f"{self.parallel_min_candidates}"
            )

    @property
    def workers(self) -> int:
        if self.parallelism is not None:
            return self.parallelism
        return os.cpu_count() or 1


class CollectiveResult(NamedTuple):
    """The outcome of a collective planning run

    Attributes:
        paths: The assigned path of every routed query.
        elm: The edge loads after all assignments.
        failures: The routing error of every query that could not be routed.
        order: The query ids in the order they were assigned.
        runtimes: The planning time spent on each query, in seconds.
    """

    paths: Dict[QueryId, Path]
    elm: EdgeLoadMatrix
    failures: Dict[QueryId, RoutingError]
    order: List[QueryId]
    runtimes: Dict[QueryId, float]


def _free_flow_arrival(
    q: Query, free_flow: Mapping[QueryId, float]
) -> float:
    return q.depart + free_flow[q.id]


def form_batch(
    queries: Iterable[Query],
    current: Query,
    cfg: BatchConfig,
    free_flow: Mapping[QueryId, float],
    *,
    interval_length_s: float = 360.0,
) -> List[Query]:
    """The pending queries departing within the window opened by ``current``

    Args:
        queries: The pending queries.
        current: The query opening the window; its departure is the start.
        cfg: The batch parameters.
        free_flow: The free-flow cost of every query, in interval units.
        interval_length_s: The length of one interval in seconds.

    Returns:
        The queries departing in ``[current.depart, current.depart + y]``,
        sorted by free-flow arrival time and then by id.
    """
    end = current.depart + cfg.window_y_s / interval_length_s
    batch = [
        q
        for q in queries
        if current.depart - TIME_TOL <= q.depart <= end + TIME_TOL
    ]
    batch.sort(key=lambda q: (_free_flow_arrival(q, free_flow), q.id))
    return batch


def is_free_flow_path_congested(
    net: RoadNetwork, elm: LoadView, phi: Path
) -> bool:
    """Whether any cell spanned by ``phi`` is loaded to capacity or beyond"""
    for hop in phi.hops:
        capacity = net.attrs(hop.edge_id).free_flow_capacity
        for edge_id, interval in hop.cells():
            if interval >= elm.horizon:
                continue
            if elm.load(edge_id, interval) >= capacity:
                return True
    return False


def define_candidate_set(
    batch: Sequence[Query],
    base: Query,
    predictor: PenaltyPredictor,
    free_flow: Mapping[QueryId, float],
    cfg: Optional[BatchConfig] = None,
) -> List[Query]:
    """The queries that may compete with ``base`` for road space

    The expected arrival of ``base`` is its free-flow arrival plus the
    predicted penalty; every batch query whose free-flow arrival is earlier
    is a candidate. ``base`` is always included and the set is capped at
    ``cfg.max_candidates`` by earliest free-flow arrival.
    """
    xi = _free_flow_arrival(base, free_flow) + predictor.predict(base)
    others = sorted(
        (
            q
            for q in batch
            if q.id != base.id and _free_flow_arrival(q, free_flow) < xi
        ),
        key=lambda q: (_free_flow_arrival(q, free_flow), q.id),
    )
    if cfg is not None and cfg.max_candidates:
        others = others[: cfg.max_candidates - 1]
    candidates = others + [base]
    candidates.sort(key=lambda q: (_free_flow_arrival(q, free_flow), q.id))
    return candidates


def select_minimal_arrival(
    candidates: Sequence[Tuple[Query, Path]]
) -> Tuple[Query, Path]:
    """The evaluated candidate with the earliest arrival

    Arrivals within :data:`tlan.helpers.TIME_TOL` of each other count as a
    tie, which goes to the earlier free-flow arrival and then the lower id.
    """
    if not candidates:
        raise ValueError("Cannot select from an empty candidate set")
    best_q, best = candidates[0]
    for q, path in candidates[1:]:
        if path.total_arrival < best.total_arrival - TIME_TOL:
            best_q, best = q, path
        elif abs(path.total_arrival - best.total_arrival) <= TIME_TOL and (
            path.free_flow_arrival,
            q.id,
        ) < (best.free_flow_arrival, best_q.id):
            best_q, best = q, path
    return best_q, best


_PlanResult = Tuple[Optional[Path], Optional[RoutingError], float]

# State of a worker process, set once by ``_init_worker``
_WORKER: Dict[str, Any] = {}


def _init_worker(
    router: Router, background: Optional[EdgeLoadMatrix]
) -> None:
    _WORKER["router"] = router
    _WORKER["background"] = background


def _plan(router: Router, q: Query, loads: LoadView) -> _PlanResult:
    start = time.perf_counter()
    try:
        path: Optional[Path] = router.route(q, loads)
        error = None
    except RoutingError as exc:
        path, error = None, exc
    return path, error, time.perf_counter() - start


def _plan_chunk(
    chunk: Sequence[Query], horizon: int, cells: Dict[Cell, int]
) -> List[_PlanResult]:
    loads = FrozenLoadView(horizon, cells, _WORKER["background"])
    return [_plan(_WORKER["router"], q, loads) for q in chunk]


class _Planner:
    """The mutable state of one collective planning run

    Worker processes are only started once a candidate set large enough to
    be worth shipping to them comes up.
    """

    def __init__(
        self,
        net: RoadNetwork,
        router: Router,
        elm: EdgeLoadMatrix,
        cfg: BatchConfig,
    ):
        self.net = net
        self.router = router
        self.elm = elm
        self.cfg = cfg
        self.pem = PathEdgeMatrix()
        self.paths: Dict[QueryId, Path] = {}
        self.failures: Dict[QueryId, RoutingError] = {}
        self.order: List[QueryId] = []
        self.runtimes: Dict[QueryId, float] = {}
        self._pool: Optional[Executor] = None

    def _parallel(self, stale: Sequence[Query]) -> List[_PlanResult]:
        workers = self.cfg.workers
        if self._pool is None:
            logger.info("Starting %d worker processes", workers)
            self._pool = process_pool(
                workers, _init_worker, (self.router, self.elm.background)
            )
        chunks = split_evenly(stale, workers)
        logger.debug(
            "Evaluating %d candidates on %d worker processes",
            len(stale),
            len(chunks),
        )
        # The controlled loads are sent as a plain snapshot with every step
        cells = dict(self.elm.cells())
        results = self._pool.map(
            _plan_chunk, chunks, repeat(self.elm.horizon), repeat(cells)
        )
        return [result for chunk in results for result in chunk]

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def evaluate(
        self, candidates: Sequence[Query]
    ) -> List[Tuple[Query, Path]]:
        """Plan every candidate without a valid cached path"""
        stale = [q for q in candidates if q.id not in self.pem]
        if (
            self.cfg.workers > 1
            and len(stale) >= self.cfg.parallel_min_candidates
        ):
            results = self._parallel(stale)
        else:
            loads = self.elm.view()
            results = [_plan(self.router, q, loads) for q in stale]
        for q, (path, error, elapsed) in zip(stale, results):
            self.runtimes[q.id] = self.runtimes.get(q.id, 0.0) + elapsed
            if path is None:
                self.fail(q, error)
            else:
                self.pem.put(q.id, path)
        logger.debug(
            "Evaluated %d of %d candidates", len(stale), len(candidates)
        )
        return [
            (q, self.pem.paths[q.id]) for q in candidates if q.id in self.pem
        ]

    def fail(self, q: Query, error: Optional[RoutingError]) -> None:
        assert error is not None
        logger.warning("Query %r could not be routed: %s", q.id, error)
        self.failures[q.id] = error
        self.pem.discard(q.id)

    def assign(self, q: Query, path: Path) -> None:
        self.elm.add_path(path)
        self.paths[q.id] = path
        self.order.append(q.id)
        self.pem.discard(q.id)
        if self.cfg.refresh and self.router.cell_local:
            stale = refresh_candidate_set(self.pem, path)
            for query_id in stale:
                self.pem.discard(query_id)
            logger.debug(
                "Assigned query %r; %d cached candidates invalidated",
                q.id,
                len(stale),
            )
        else:
            self.pem = PathEdgeMatrix()


def cs_mat(
    net: RoadNetwork,
    queries: Iterable[Query],
    cfg: Optional[BatchConfig] = None,
    predictor: Optional[PenaltyPredictor] = None,
    *,
    router: Optional[Router] = None,
    background: Optional[EdgeLoadMatrix] = None,
) -> CollectiveResult:
    """Assign paths to a set of queries collectively

    Pending queries are grouped into batches of departures within
    ``cfg.window_y_s`` of the earliest pending one, and processed in order of
    free-flow arrival. If the free-flow path of the next query is not
    congested it is assigned directly. Otherwise every query that could
    arrive before it (see :func:`define_candidate_set`) is planned under the
    current loads and the earliest arrival among them is assigned first.
    This repeats until the batch is empty.

    Args:
        net: The road network.
        queries: The queries to route. Ids must be unique.
        cfg: The batch parameters.
        predictor: The congestion-penalty predictor; defaults to predicting
            no congestion.
        router: The single-query algorithm used to plan candidates; defaults
            to load-aware A*.
        background: Frozen uncontrolled load added to every read.

    Returns:
        The assigned paths, final loads, failures, assignment order and
        per-query planning times.
    """
    cfg = BatchConfig() if cfg is None else cfg
    predictor = ZeroPredictor() if predictor is None else predictor
    router = LoadAwareRouter(net) if router is None else router
    interval_length_s = net.config.interval_length_s

    elm = EdgeLoadMatrix(net.horizon, background=background)
    planner = _Planner(net, router, elm, cfg)

    pending: List[Query] = []
    phi: Dict[QueryId, Path] = {}
    free_flow: Dict[QueryId, float] = {}
    seen: Set[QueryId] = set()
    for q in sorted(queries, key=lambda q: (q.depart, q.id)):
        if q.id in seen:
            raise ValueError(f"Duplicate query id {q.id!r}")
        seen.add(q.id)
        start = time.perf_counter()
        try:
            path = dijkstra_free_flow(net, q)
        except RoutingError as exc:
            planner.fail(q, exc)
            continue
        finally:
            planner.runtimes[q.id] = time.perf_counter() - start
        phi[q.id] = path
        free_flow[q.id] = path.free_flow_cost
        pending.append(q)
    logger.info(
        "Planning %d queries collectively with %r", len(pending), router
    )

    done: Set[QueryId] = set()
    head = 0
    try:
        while True:
            while head < len(pending) and pending[head].id in done:
                head += 1
            if head == len(pending):
                break
            batch = form_batch(
                (q for q in pending[head:] if q.id not in done),
                pending[head],
                cfg,
                free_flow,
                interval_length_s=interval_length_s,
            )
            logger.debug(
                "Batch of %d queries opened at %s", len(batch), batch[0].id
            )
            while batch:
                base = batch[0]
                chosen = _assign_next(
                    planner, base, batch, phi[base.id], predictor, free_flow
                )
                done.update(chosen)
                batch = [q for q in batch if q.id not in chosen]
    finally:
        planner.close()

    logger.info(
        "Assigned %d queries, %d failed",
        len(planner.paths),
        len(planner.failures),
    )
    return CollectiveResult(
        paths=planner.paths,
        elm=elm,
        failures=planner.failures,
        order=planner.order,
        runtimes=planner.runtimes,
    )


def _assign_next(
    planner: _Planner,
    base: Query,
    batch: Sequence[Query],
    phi: Path,
    predictor: PenaltyPredictor,
    free_flow: Mapping[QueryId, float],
) -> Set[QueryId]:
    """Run one assignment step and return the ids leaving the batch"""
    net = planner.net
    loads = planner.elm.view()
    if not is_free_flow_path_congested(net, loads, phi):
        start = time.perf_counter()
        try:
            path = evaluate_path_under_elm(
                net,
                loads,
                phi.edge_ids,
                base.depart,
                query_id=base.id,
                free_flow_cost=phi.free_flow_cost,
            )
        except RoutingError as exc:
            planner.fail(base, exc)
            return {base.id}
        finally:
            planner.runtimes[base.id] += time.perf_counter() - start
        planner.assign(base, path)
        return {base.id}

    candidates = define_candidate_set(
        batch, base, predictor, free_flow, planner.cfg
    )
    evaluated = planner.evaluate(candidates)
    removed = {q.id for q in candidates if q.id in planner.failures}
    if not evaluated:
        return removed
    chosen, path = select_minimal_arrival(evaluated)
    planner.assign(chosen, path)
    return removed | {chosen.id}
