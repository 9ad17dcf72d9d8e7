# -*- coding: utf-8 -*-
"""
The experiment runner: plan a workload with one algorithm, replay the plan
against the loads it creates, summarize, and write the run artifacts.
"""

from __future__ import annotations

__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "plan_chronological",
    "warm_up_elm",
    "train_table_predictor",
    "run_experiment",
]

import logging
import time
from pathlib import Path as FilePath
from typing import (
    Any,
    Dict,
    Iterable,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Union,
)

import numpy as np

from tlan.collective.csmat import BatchConfig, CollectiveResult, cs_mat
from tlan.collective.predictors import (
    PenaltyPredictor,
    TablePredictor,
    ZeroPredictor,
    table_predictor,
)
from tlan.errors import HorizonOverflowError, RoutingError
from tlan.helpers import QueryId, dataclass, file_sha256, significant
from tlan.network.graph import RoadNetwork
from tlan.routing.astar import LoadAwareRouter
from tlan.routing.registry import ALGORITHMS, get_router
from tlan.routing.router import Router
from tlan.routing.types import Path, Query
from tlan.simulation import artifacts
from tlan.simulation.metrics import MetricsReport, compute_metrics
from tlan.simulation.replay import (
    REPLAY_ORDERS,
    ReplayEntry,
    ReplayResult,
    apply_control_factor,
    replay_assignment,
)
from tlan.state import EdgeLoadMatrix, write_elm_csv
from tlan.workload import QuerySet, precompute_free_flow

logger = logging.getLogger(__name__)

PathLike = Union[str, FilePath]

PREDICTORS = ("zero", "table")


@dataclass
class ExperimentConfig:
    """Parameters of one experiment run

    Args:
        k: The number of free-flow candidates for top-k selection.
        window_y_s: The batch window of the collective planner in seconds.
        max_candidates: The candidate cap of the collective planner.
        refresh: Whether the collective planner re-plans only intersecting
            candidates.
        gamma: The controlled fraction of the load. ``None`` means every
            vehicle is controlled and there is no background load.
        seed: The seed for every random choice of the run.
        workers: The number of worker processes; defaults to available
            cores.
        replay_order: ``"chronological"`` or ``"assignment"``.
        predictor: ``"table"`` (the default) learns the congestion penalty
            of each origin-destination pair from a load-aware A* run over
            the workload; ``"zero"`` predicts no congestion, which leaves
            every candidate set of the collective planner at one query.
        training_fraction: The share of the workload used to train the table
            predictor.
    """

    k: int = 5
    window_y_s: float = 14400.0
    max_candidates: int = 0
    refresh: bool = True
    gamma: Optional[float] = None
    seed: int = 0
    workers: Optional[int] = None
    replay_order: str = "chronological"
    predictor: str = "table"
    training_fraction: float = 1.0

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be at least 1; got {self.k}")
        if self.gamma is not None and not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must be in [0, 1]; got {self.gamma}")
        if self.replay_order not in REPLAY_ORDERS:
            raise ValueError(
                f"replay_order must be one of {REPLAY_ORDERS}; got "
                f"{self.replay_order!r}"
            )
        if self.predictor not in PREDICTORS:
            raise ValueError(
                f"predictor must be one of {PREDICTORS}; got "
                f"{self.predictor!r}"
            )
        if not 0.0 < self.training_fraction <= 1.0:
            raise ValueError(
                "training_fraction must be in (0, 1]; got "
                f"{self.training_fraction}"
            )

    def batch_config(self) -> BatchConfig:
        return BatchConfig(
            window_y_s=self.window_y_s,
            max_candidates=self.max_candidates,
            parallelism=self.workers,
            refresh=self.refresh,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "window_y_s": self.window_y_s,
            "max_candidates": self.max_candidates,
            "refresh": self.refresh,
            "gamma": self.gamma,
            "seed": self.seed,
            "workers": self.workers,
            "replay_order": self.replay_order,
            "predictor": self.predictor,
            "training_fraction": self.training_fraction,
        }


class ExperimentResult(NamedTuple):
    metrics: MetricsReport
    manifest: Dict[str, Any]
    plan: CollectiveResult
    replay: ReplayResult


def plan_chronological(
    net: RoadNetwork,
    queries: Iterable[Query],
    router: Router,
    *,
    background: Optional[EdgeLoadMatrix] = None,
) -> CollectiveResult:
    """Route queries one at a time in order of departure

    Each planned path is added to the loads seen by later queries.
    """
    elm = EdgeLoadMatrix(net.horizon, background=background)
    paths: Dict[QueryId, Path] = {}
    failures: Dict[QueryId, RoutingError] = {}
    order: List[QueryId] = []
    runtimes: Dict[QueryId, float] = {}
    for q in sorted(queries, key=lambda q: (q.depart, q.id)):
        start = time.perf_counter()
        try:
            path = router.route(q, elm)
        except RoutingError as exc:
            failures[q.id] = exc
            continue
        finally:
            runtimes[q.id] = time.perf_counter() - start
        try:
            elm.add_path(path)
        except HorizonOverflowError as exc:
            logger.debug("Query %r is not tracked in the loads: %s", q.id, exc)
        paths[q.id] = path
        order.append(q.id)
    for qid, exc in failures.items():
        logger.warning("Query %r could not be routed: %s", qid, exc)
    logger.info(
        "Planned %d queries with %r, %d failed",
        len(paths),
        router,
        len(failures),
    )
    return CollectiveResult(paths, elm, failures, order, runtimes)


def warm_up_elm(
    net: RoadNetwork,
    queries: Iterable[Query],
    *,
    router: Optional[Router] = None,
) -> EdgeLoadMatrix:
    """The loads left by routing a representative workload with load-aware
    A* in order of departure"""
    router = LoadAwareRouter(net) if router is None else router
    return plan_chronological(net, queries, router).elm


def train_table_predictor(
    net: RoadNetwork,
    queries: Iterable[Query],
    fraction: float = 1.0,
    seed: int = 0,
    *,
    background: Optional[EdgeLoadMatrix] = None,
) -> TablePredictor:
    """Fit a table predictor to the penalties of a seeded sample

    A ``fraction`` of the queries is drawn without replacement, routed with
    load-aware A* in order of departure, and the resulting penalties form
    the training table.
    """
    queries = list(queries)
    if not queries:
        return table_predictor([])
    rng = np.random.default_rng(seed)
    size = max(1, int(round(fraction * len(queries))))
    picked = sorted(rng.choice(len(queries), size=size, replace=False))
    sample = [queries[i] for i in picked]
    plan = plan_chronological(
        net, sample, LoadAwareRouter(net), background=background
    )
    by_id = {q.id: q for q in sample}
    predictor = table_predictor(
        (by_id[qid], path.penalty) for qid, path in plan.paths.items()
    )
    logger.info("Trained %r on %d queries", predictor, len(plan.paths))
    return predictor


def _inputs(paths: Mapping[str, Optional[PathLike]]) -> Dict[str, Any]:
    inputs: Dict[str, Any] = {}
    for name, path in paths.items():
        if path is None:
            continue
        inputs[name] = {"path": str(path), "sha256": file_sha256(path)}
    return inputs


def run_experiment(
    net: RoadNetwork,
    queries: QuerySet,
    algorithm: str,
    cfg: Optional[ExperimentConfig] = None,
    *,
    base_elm: Optional[EdgeLoadMatrix] = None,
    predictor: Optional[PenaltyPredictor] = None,
    out_dir: Optional[PathLike] = None,
    network_path: Optional[PathLike] = None,
    queries_path: Optional[PathLike] = None,
) -> ExperimentResult:
    """Plan, replay and summarize one workload with one algorithm

    Args:
        net: The road network.
        queries: The workload.
        algorithm: One of ``ffnd``, ``slad``, ``tlatk``, ``tlaa`` or
            ``csmat``.
        cfg: The run parameters.
        base_elm: The base load from which the background is derived when
            ``cfg.gamma`` is set; defaults to the loads of routing the
            workload itself with load-aware A*.
        predictor: The penalty predictor for ``csmat``; built from
            ``cfg.predictor`` when omitted.
        out_dir: If given, the run artifacts are written here.
        network_path: The network file, hashed into the manifest.
        queries_path: The query file, hashed into the manifest.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(
            f"Unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}"
        )
    cfg = ExperimentConfig() if cfg is None else cfg
    wall: Dict[str, float] = {}
    started = time.perf_counter()

    if not queries.free_flow:
        queries = precompute_free_flow(net, queries, workers=cfg.workers or 1)
    routable = queries.routable

    background = None
    if cfg.gamma is not None:
        tic = time.perf_counter()
        base = warm_up_elm(net, routable) if base_elm is None else base_elm
        background = apply_control_factor(base, cfg.gamma)
        if not len(background):
            background = None
        wall["warm_up_s"] = time.perf_counter() - tic

    tic = time.perf_counter()
    if algorithm == "csmat":
        if predictor is None and cfg.predictor == "table":
            predictor = train_table_predictor(
                net,
                routable,
                cfg.training_fraction,
                cfg.seed,
                background=background,
            )
        plan = cs_mat(
            net,
            routable,
            cfg.batch_config(),
            ZeroPredictor() if predictor is None else predictor,
            background=background,
        )
    else:
        router = get_router(algorithm, net, k=cfg.k)
        plan = plan_chronological(net, routable, router, background=background)
    wall["plan_s"] = time.perf_counter() - tic

    by_id = queries.by_id()
    if cfg.replay_order == "assignment":
        replay_ids = list(plan.order)
    else:
        replay_ids = [q.id for q in routable if q.id in plan.paths]
    entries = [
        ReplayEntry(
            by_id[qid],
            plan.paths[qid].edge_ids,
            queries.free_flow[qid].free_flow_cost,
            plan.runtimes.get(qid, 0.0),
        )
        for qid in replay_ids
    ]
    tic = time.perf_counter()
    replay = replay_assignment(
        net, entries, background=background, order=cfg.replay_order
    )
    wall["replay_s"] = time.perf_counter() - tic

    tic = time.perf_counter()
    metrics = compute_metrics(replay, net, queries.free_flow_costs)
    wall["metrics_s"] = time.perf_counter() - tic
    wall["total_s"] = time.perf_counter() - started

    runtimes = [replay.runtimes[qid] for qid in replay.paths]
    manifest: Dict[str, Any] = {
        "algorithm": algorithm,
        "parameters": cfg.to_dict(),
        "network_config": net.config.to_dict(),
        "inputs": _inputs({"network": network_path, "queries": queries_path}),
        "counts": {
            "queries": len(queries),
            "unreachable": len(queries.unreachable),
            "routed": len(plan.paths),
            "failed": len(plan.failures),
            "finished": len(replay.paths),
            "dropped": len(replay.dropped),
        },
        "wall_times_s": {k: significant(v) for k, v in wall.items()},
        "timing": {
            "runtime_mean_s": significant(
                float(np.mean(runtimes)) if runtimes else 0.0
            ),
            "end_to_end_avg_min": significant(metrics.end_to_end_avg),
        },
    }
    logger.info(
        "%s: AJT %.4f min, FFCU %.4f, LD %.4f over %d journeys",
        algorithm,
        metrics.ajt,
        metrics.ffcu,
        metrics.ld,
        metrics.count,
    )

    if out_dir is not None:
        _write_run(FilePath(out_dir), net, replay, metrics, manifest)
    return ExperimentResult(metrics, manifest, plan, replay)


def _write_run(
    out_dir: FilePath,
    net: RoadNetwork,
    replay: ReplayResult,
    metrics: MetricsReport,
    manifest: Dict[str, Any],
) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = net.config
    artifacts.write_paths_csv(
        replay.paths.values(), out_dir / artifacts.PATHS_FILE, cfg
    )
    write_elm_csv(
        replay.elm, out_dir / artifacts.ELM_FILE, include_background=True
    )
    artifacts.write_json(
        metrics.to_dict(deterministic=True), out_dir / artifacts.METRICS_FILE
    )
    artifacts.write_penalties_csv(
        replay.penalties, out_dir / artifacts.PENALTIES_FILE, cfg
    )
    artifacts.write_json(manifest, out_dir / artifacts.MANIFEST_FILE)
    logger.info("Wrote run artifacts to %s", out_dir)
