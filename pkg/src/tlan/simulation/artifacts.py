# -*- coding: utf-8 -*-
"""
Run artifacts. Every run directory holds ``manifest.json``, ``paths.csv``,
``elm.csv``, ``metrics.json`` and ``penalties.csv``; numbers are written with
9 significant digits.
"""

from __future__ import annotations

__all__ = [
    "MANIFEST_FILE",
    "write_paths_csv",
    "write_penalties_csv",
    "write_json",
    "read_manifest",
    "compare_runs",
]

import json
import logging
from pathlib import Path as FilePath
from typing import Any, Dict, Iterable, Mapping, Sequence, Union

import pandas as pd

from tlan.errors import ManifestMismatchError
from tlan.helpers import QueryId, significant
from tlan.network.config import NetworkConfig
from tlan.routing.types import Path

logger = logging.getLogger(__name__)

PathLike = Union[str, FilePath]

MANIFEST_FILE = "manifest.json"
METRICS_FILE = "metrics.json"
PATHS_FILE = "paths.csv"
ELM_FILE = "elm.csv"
PENALTIES_FILE = "penalties.csv"


def _float_format(value: float) -> str:
    return repr(significant(value))


def write_paths_csv(
    paths: Iterable[Path], path: PathLike, cfg: NetworkConfig
) -> FilePath:
    """Write ``query_id,hop_index,edge_id,entry_time_s,exit_time_s`` rows"""
    rows = [
        (
            p.query_id,
            index,
            hop.edge_id,
            _float_format(cfg.to_seconds(hop.entry_time)),
            _float_format(cfg.to_seconds(hop.exit_time)),
        )
        for p in paths
        for index, hop in enumerate(p.hops)
    ]
    df = pd.DataFrame(
        rows,
        columns=[
            "query_id",
            "hop_index",
            "edge_id",
            "entry_time_s",
            "exit_time_s",
        ],
    )
    path = FilePath(path)
    df.to_csv(path, index=False)
    return path


def write_penalties_csv(
    penalties: Mapping[QueryId, float], path: PathLike, cfg: NetworkConfig
) -> FilePath:
    """Write the congestion penalty of every query in minutes"""
    minutes = cfg.interval_length_s / 60.0
    df = pd.DataFrame(
        [
            (qid, _float_format(value * minutes))
            for qid, value in penalties.items()
        ],
        columns=["query_id", "pi_minutes"],
    )
    path = FilePath(path)
    df.to_csv(path, index=False)
    return path


def write_json(data: Mapping[str, Any], path: PathLike) -> FilePath:
    path = FilePath(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def read_manifest(run_dir: PathLike) -> Dict[str, Any]:
    with open(FilePath(run_dir) / MANIFEST_FILE, encoding="utf-8") as f:
        return json.load(f)


def _input_hashes(manifest: Mapping[str, Any]) -> Dict[str, Any]:
    return {
        name: info.get("sha256")
        for name, info in manifest.get("inputs", {}).items()
    }


def compare_runs(run_dirs: Sequence[PathLike]) -> pd.DataFrame:
    """One row of headline measures per run

    Raises:
        ManifestMismatchError: If the runs were made from different network
            or query files.
    """
    if len(run_dirs) < 2:
        raise ValueError("At least two runs are needed for a comparison")
    rows = []
    reference = None
    for run_dir in run_dirs:
        manifest = read_manifest(run_dir)
        hashes = _input_hashes(manifest)
        if reference is None:
            reference = (run_dir, hashes)
        elif hashes != reference[1]:
            raise ManifestMismatchError(
                f"{run_dir} was produced from different inputs than "
                f"{reference[0]}"
            )
        with open(FilePath(run_dir) / METRICS_FILE, encoding="utf-8") as f:
            metrics = json.load(f)
        rows.append(
            {
                "run": str(run_dir),
                "algorithm": manifest["algorithm"],
                "ajt_min": metrics["ajt_min"],
                "ffcu": metrics["ffcu"],
                "ld": metrics["ld"],
                "penalty_mean_min": metrics["penalty_mean_min"],
                "penalty_std_min": metrics["penalty_std_min"],
                "end_to_end_avg_min": manifest.get("timing", {}).get(
                    "end_to_end_avg_min"
                ),
            }
        )
    logger.info("Compared %d runs", len(rows))
    return pd.DataFrame(rows)
