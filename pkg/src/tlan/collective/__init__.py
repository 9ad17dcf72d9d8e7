# -*- coding: utf-8 -*-
"""
Collective assignment of query batches, ordered by achievable arrival time.
"""

__all__ = [
    "BatchConfig",
    "CollectiveResult",
    "cs_mat",
    "form_batch",
    "is_free_flow_path_congested",
    "define_candidate_set",
    "select_minimal_arrival",
    "PathEdgeMatrix",
    "refresh_candidate_set",
    "PenaltyPredictor",
    "ZeroPredictor",
    "TablePredictor",
    "zero_predictor",
    "table_predictor",
]

from tlan.collective.csmat import (
    BatchConfig,
    CollectiveResult,
    cs_mat,
    define_candidate_set,
    form_batch,
    is_free_flow_path_congested,
    select_minimal_arrival,
)
from tlan.collective.path_matrix import PathEdgeMatrix, refresh_candidate_set
from tlan.collective.predictors import (
    PenaltyPredictor,
    TablePredictor,
    ZeroPredictor,
    table_predictor,
    zero_predictor,
)
