# -*- coding: utf-8 -*-
# mypy: ignore-errors

import json
import logging

import numpy as np
import pytest

from tlan.collective import TablePredictor
from tlan.errors import ManifestMismatchError
from tlan.network import NetworkConfig, save_network
from tlan.routing import FreeFlowRouter, LoadAwareRouter, Query
from tlan.simulation import (
    ExperimentConfig,
    compare_runs,
    plan_chronological,
    run_experiment,
    train_table_predictor,
    warm_up_elm,
)
from tlan.simulation.artifacts import (
    ELM_FILE,
    MANIFEST_FILE,
    METRICS_FILE,
    PATHS_FILE,
    PENALTIES_FILE,
)
from tlan.state import EdgeLoadMatrix
from tlan.workload import QuerySet, generate_queries, save_queries

RUN_FILES = [MANIFEST_FILE, METRICS_FILE, PATHS_FILE, ELM_FILE, PENALTIES_FILE]


@pytest.fixture
def motivating_workload():
    return QuerySet.from_queries([Query(i, 1, 4, 0.5) for i in range(1, 7)])


@pytest.fixture
def grid_workload(grid_net):
    return generate_queries(
        grid_net, 120, (0.0, 1800.0), hotspot_bias=0.5, seed=11
    )


def test_motivating_example(motivating_net, motivating_workload):
    cfg = ExperimentConfig(workers=1)
    collective = run_experiment(
        motivating_net, motivating_workload, "csmat", cfg
    )
    direct = run_experiment(motivating_net, motivating_workload, "ffnd", cfg)

    # 0.38 intervals of travel over six vehicles, in minutes
    np.testing.assert_allclose(collective.metrics.ajt, 0.38 / 6 * 6.0)
    assert collective.metrics.ajt < direct.metrics.ajt
    assert collective.metrics.count == 6
    assert collective.manifest["counts"]["finished"] == 6


@pytest.mark.parametrize("algorithm", ["tlaa", "tlatk", "csmat"])
def test_assignment_replay_reproduces_plan(grid_net, grid_workload, algorithm):
    cfg = ExperimentConfig(workers=2, replay_order="assignment", k=3)
    result = run_experiment(grid_net, grid_workload, algorithm, cfg)
    assert set(result.replay.paths) == set(result.plan.paths)
    for qid, planned in result.plan.paths.items():
        np.testing.assert_allclose(
            result.replay.paths[qid].total_arrival,
            planned.total_arrival,
            atol=1e-9,
        )


def test_deterministic_artifacts(tmp_path, grid_net, grid_workload):
    dirs = []
    for workers in (1, 4):
        out = tmp_path / f"run-{workers}"
        run_experiment(
            grid_net,
            grid_workload,
            "csmat",
            ExperimentConfig(workers=workers),
            out_dir=out,
        )
        dirs.append(out)
    for name in RUN_FILES:
        assert (dirs[0] / name).exists()
    for name in [METRICS_FILE, PATHS_FILE, ELM_FILE, PENALTIES_FILE]:
        assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()

    metrics = json.loads((dirs[0] / METRICS_FILE).read_text())
    assert "end_to_end_avg_min" not in metrics
    manifest = json.loads((dirs[0] / MANIFEST_FILE).read_text())
    assert manifest["algorithm"] == "csmat"
    assert manifest["parameters"]["workers"] == 1
    assert manifest["network_config"]["horizon_intervals"] == 48
    assert "end_to_end_avg_min" in manifest["timing"]


def test_full_control_matches_no_background(grid_net, grid_workload):
    plain = run_experiment(
        grid_net, grid_workload, "tlaa", ExperimentConfig(workers=1)
    )
    controlled = run_experiment(
        grid_net, grid_workload, "tlaa", ExperimentConfig(workers=1, gamma=1.0)
    )
    assert controlled.replay.elm.background is None
    assert plain.metrics.to_dict(
        deterministic=True
    ) == controlled.metrics.to_dict(deterministic=True)


def test_background_from_base_load(line_net):
    base = EdgeLoadMatrix(line_net.horizon)
    base.set_load("ab", 0, 22)
    queries = QuerySet.from_queries([Query(0, "a", "c", 0.5)])
    result = run_experiment(
        line_net,
        queries,
        "ffnd",
        ExperimentConfig(gamma=0.5, workers=1),
        base_elm=base,
    )
    assert result.replay.elm.load("ab", 0) == 12
    np.testing.assert_allclose(
        result.replay.paths[0].total_arrival, 0.5 ** (1 / 6) + 0.2
    )


def test_free_flow_plan_beyond_horizon(make_network, caplog):
    net = make_network(
        [(1, "a", "b", 0.6, 5.0)], NetworkConfig(horizon_intervals=2)
    )
    q = Query(0, "a", "b", 1.5)
    with caplog.at_level(logging.DEBUG, logger="tlan.simulation.experiment"):
        plan = plan_chronological(net, [q], FreeFlowRouter(net))
    assert list(plan.paths) == [0]
    assert not plan.failures
    assert not len(plan.elm)
    assert "not tracked in the loads" in caplog.text


def test_warm_up_and_training(grid_net, grid_workload):
    routable = list(grid_workload)
    elm = warm_up_elm(grid_net, routable)
    plan = plan_chronological(grid_net, routable, LoadAwareRouter(grid_net))
    assert elm == plan.elm
    assert plan.order == [q.id for q in routable]

    predictor = train_table_predictor(grid_net, routable, 0.5, seed=3)
    assert isinstance(predictor, TablePredictor)
    assert predictor.means
    assert all(v >= 0 for v in predictor.means.values())

    result = run_experiment(
        grid_net,
        grid_workload,
        "csmat",
        ExperimentConfig(workers=1, predictor="table"),
    )
    assert result.metrics.count == len(routable)


def test_compare_runs(tmp_path, grid_net, grid_workload):
    net_path = save_network(grid_net, tmp_path / "grid.json")[0]
    q_path = save_queries(grid_workload, tmp_path / "q.csv", grid_net)
    runs = []
    for algorithm in ("ffnd", "csmat"):
        out = tmp_path / algorithm
        run_experiment(
            grid_net,
            grid_workload,
            algorithm,
            ExperimentConfig(workers=1),
            out_dir=out,
            network_path=net_path,
            queries_path=q_path,
        )
        runs.append(out)
    table = compare_runs(runs)
    assert list(table["algorithm"]) == ["ffnd", "csmat"]
    assert {"ajt_min", "ffcu", "ld", "end_to_end_avg_min"} <= set(
        table.columns
    )

    with pytest.raises(ValueError):
        compare_runs(runs[:1])

    other_queries = generate_queries(grid_net, 10, (0.0, 600.0), seed=1)
    other_path = save_queries(other_queries, tmp_path / "other.csv", grid_net)
    run_experiment(
        grid_net,
        other_queries,
        "ffnd",
        ExperimentConfig(workers=1),
        out_dir=tmp_path / "other",
        network_path=net_path,
        queries_path=other_path,
    )
    with pytest.raises(ManifestMismatchError):
        compare_runs([runs[0], tmp_path / "other"])


def test_config_validation(line_net):
    assert ExperimentConfig().predictor == "table"
    with pytest.raises(ValueError):
        ExperimentConfig(k=0)
    with pytest.raises(ValueError):
        ExperimentConfig(gamma=1.2)
    with pytest.raises(ValueError):
        ExperimentConfig(replay_order="random")
    with pytest.raises(ValueError):
        ExperimentConfig(predictor="oracle")
    with pytest.raises(ValueError):
        ExperimentConfig(training_fraction=0.0)
    with pytest.raises(ValueError):
        run_experiment(line_net, QuerySet.from_queries([]), "dijkstra")
