# -*- coding: utf-8 -*-
"""
Replaying planned routes against the loads they create, summary measures,
and the experiment runner that ties planning, replay and reporting together.
"""

__all__ = [
    "ReplayEntry",
    "ReplayResult",
    "replay_assignment",
    "apply_control_factor",
    "MetricsReport",
    "compute_metrics",
    "penalty_histogram",
    "ExperimentConfig",
    "ExperimentResult",
    "plan_chronological",
    "warm_up_elm",
    "train_table_predictor",
    "run_experiment",
    "compare_runs",
]

from tlan.simulation.artifacts import compare_runs
from tlan.simulation.experiment import (
    ExperimentConfig,
    ExperimentResult,
    plan_chronological,
    run_experiment,
    train_table_predictor,
    warm_up_elm,
)
from tlan.simulation.metrics import (
    MetricsReport,
    compute_metrics,
    penalty_histogram,
)
from tlan.simulation.replay import (
    ReplayEntry,
    ReplayResult,
    apply_control_factor,
    replay_assignment,
)
