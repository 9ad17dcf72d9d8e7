# -*- coding: utf-8 -*-

from __future__ import annotations

__all__ = ["MetricsReport", "compute_metrics", "penalty_histogram"]

import math
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from tlan.helpers import QueryId, dataclass, significant
from tlan.network.graph import RoadNetwork
from tlan.simulation.replay import ReplayResult


@dataclass
class MetricsReport:
    """Summary measures of one replayed run

    Args:
        ajt: The average journey time in minutes.
        ffcu: The free-flow capacity utilization: the mean over all
            edge-interval cells of ``min(load / capacity, 1)``.
        ld: The load distribution: the fraction of edge-interval cells with
            any load.
        penalty_mean: The mean congestion penalty in minutes.
        penalty_std: The population standard deviation of the penalties.
        penalty_histogram: ``(bin_start_minutes, count)`` pairs over
            one-minute bins.
        end_to_end_avg: The mean of planning time plus journey time, in
            minutes.
        count: The number of finished journeys.
        dropped: The number of vehicles that did not finish in time.
        empty: Whether no journey finished.
    """

    ajt: float
    ffcu: float
    ld: float
    penalty_mean: float
    penalty_std: float
    penalty_histogram: Tuple[Tuple[int, int], ...]
    end_to_end_avg: float
    count: int
    dropped: int
    empty: bool

    def to_dict(self, *, deterministic: bool = False) -> Dict[str, Any]:
        """A JSON-ready dictionary with 9 significant digits

        With ``deterministic=True`` the wall-clock dependent end-to-end time
        is left out.
        """
        data: Dict[str, Any] = {
            "ajt_min": significant(self.ajt),
            "ffcu": significant(self.ffcu),
            "ld": significant(self.ld),
            "penalty_mean_min": significant(self.penalty_mean),
            "penalty_std_min": significant(self.penalty_std),
            "penalty_histogram": [
                [int(b), int(c)] for b, c in self.penalty_histogram
            ],
            "count": int(self.count),
            "dropped": int(self.dropped),
            "empty": bool(self.empty),
        }
        if not deterministic:
            data["end_to_end_avg_min"] = significant(self.end_to_end_avg)
        return data


def penalty_histogram(
    penalties_min: Sequence[float],
) -> Tuple[Tuple[int, int], ...]:
    """Counts of penalties over one-minute bins starting at zero

    Tiny negative penalties from rounding fall in the first bin.
    """
    if not len(penalties_min):
        return ()
    values = np.maximum(np.asarray(penalties_min, dtype=float), 0.0)
    top = int(math.floor(values.max())) + 1
    counts, edges = np.histogram(values, bins=np.arange(top + 1))
    return tuple((int(b), int(c)) for b, c in zip(edges[:-1], counts))


def compute_metrics(
    result: ReplayResult,
    net: RoadNetwork,
    free_flow_costs: Optional[Mapping[QueryId, float]] = None,
) -> MetricsReport:
    """Journey, utilization and fairness measures of a replay

    Args:
        result: The replay to summarize.
        net: The road network.
        free_flow_costs: The free-flow cost of every query in interval units;
            defaults to the costs recorded on the replayed paths.

    A replay without any finished journey reports zeros throughout, even
    when a background load occupies the network.
    """
    if not result.paths:
        return MetricsReport(
            ajt=0.0,
            ffcu=0.0,
            ld=0.0,
            penalty_mean=0.0,
            penalty_std=0.0,
            penalty_histogram=(),
            end_to_end_avg=0.0,
            count=0,
            dropped=len(result.dropped),
            empty=True,
        )

    minutes = net.config.interval_length_s / 60.0
    cells = result.elm.total_cells()
    total = net.num_edges * net.horizon
    if cells and total:
        keys = list(cells)
        loads = np.array([cells[k] for k in keys], dtype=float)
        capacity = np.array(
            [net.attrs(edge_id).free_flow_capacity for edge_id, _ in keys]
        )
        ffcu = float(np.minimum(loads / capacity, 1.0).sum() / total)
        ld = float(np.count_nonzero(loads > 0) / total)
    else:
        ffcu = ld = 0.0

    ids = list(result.paths)
    durations = np.array([result.paths[q].duration for q in ids]) * minutes
    if free_flow_costs is None:
        free_flow = np.array([result.paths[q].free_flow_cost for q in ids])
    else:
        free_flow = np.array([free_flow_costs[q] for q in ids])
    penalties = durations - free_flow * minutes
    runtimes_min = (
        np.array([result.runtimes.get(q, 0.0) for q in ids]) / 60.0
    )
    return MetricsReport(
        ajt=float(durations.mean()),
        ffcu=ffcu,
        ld=ld,
        penalty_mean=float(penalties.mean()),
        penalty_std=float(penalties.std()),
        penalty_histogram=penalty_histogram(penalties),
        end_to_end_avg=float((durations + runtimes_min).mean()),
        count=len(ids),
        dropped=len(result.dropped),
        empty=False,
    )
