# -*- coding: utf-8 -*-
"""
Congestion-penalty predictors. A predictor estimates how much later than its
free-flow arrival a query will reach its destination, which bounds the set of
queries that could compete with it for road space.
"""

from __future__ import annotations

__all__ = [
    "PenaltyPredictor",
    "ZeroPredictor",
    "TablePredictor",
    "zero_predictor",
    "table_predictor",
]

from abc import ABCMeta, abstractmethod
from collections import defaultdict
from typing import Dict, Iterable, List, Mapping, Tuple

import numpy as np

from tlan.helpers import NodeId
from tlan.routing.types import Query


class PenaltyPredictor(metaclass=ABCMeta):
    """An abstract base class for congestion-penalty predictors

    Implementations must return a non-negative penalty in interval units and
    must not change state while predicting.
    """

    @abstractmethod
    def predict(self, q: Query) -> float:
        """The predicted congestion penalty of ``q``"""
        raise NotImplementedError

    def __call__(self, q: Query) -> float:
        return self.predict(q)


class ZeroPredictor(PenaltyPredictor):
    """Predict no congestion at all"""

    def predict(self, q: Query) -> float:
        return 0.0

    def __repr__(self) -> str:
        return "ZeroPredictor()"


class TablePredictor(PenaltyPredictor):
    """Look up the mean observed penalty of the query's origin-destination pair

    Pairs without observations fall back to the mean over all observations.

    Args:
        means: The mean penalty per ``(source, destination)`` pair.
        global_mean: The mean penalty over every observation.
    """

    def __init__(
        self,
        means: Mapping[Tuple[NodeId, NodeId], float],
        global_mean: float = 0.0,
    ):
        self.means = dict(means)
        self.global_mean = float(global_mean)

    def predict(self, q: Query) -> float:
        value = self.means.get((q.source, q.destination), self.global_mean)
        return max(float(value), 0.0)

    def __repr__(self) -> str:
        return (
            f"TablePredictor(pairs={len(self.means)}, "
            f"global_mean={self.global_mean:.6g})"
        )


def zero_predictor() -> PenaltyPredictor:
    return ZeroPredictor()


def table_predictor(training: Iterable[Tuple[Query, float]]) -> TablePredictor:
    """Fit a :class:`TablePredictor` to observed ``(query, penalty)`` rows

    Negative penalties (rounding noise from replays) are clipped to zero
    before averaging.
    """
    groups: Dict[Tuple[NodeId, NodeId], List[float]] = defaultdict(list)
    values: List[float] = []
    for q, penalty in training:
        penalty = max(float(penalty), 0.0)
        groups[(q.source, q.destination)].append(penalty)
        values.append(penalty)
    if not values:
        return TablePredictor({}, 0.0)
    means = {pair: float(np.mean(obs)) for pair, obs in groups.items()}
    return TablePredictor(means, float(np.mean(values)))
