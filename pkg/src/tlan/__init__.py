# -*- coding: utf-8 -*-
"""
``tlan`` routes batches of shortest-path queries over road networks whose
travel times depend on how many vehicles are expected on each road in each
time interval. Networks live in the ``network`` subpackage (see
:ref:`api-network`), single-query algorithms in ``routing``, the collective
batch planner in ``collective``, and the replay and experiment harness in
``simulation``. The ``tlan`` command line tool wraps all of them.
"""

__all__ = [
    "collective",
    "network",
    "routing",
    "simulation",
    "workload",
    "EdgeLoadMatrix",
    "NetworkConfig",
    "RoadNetwork",
    "Query",
    "Path",
]

from tlan import collective, network, routing, simulation, workload
from tlan.network import NetworkConfig, RoadNetwork
from tlan.routing import Path, Query
from tlan.state import EdgeLoadMatrix

try:
    from tlan.tlan_version import version as __version__
except ImportError:  # pragma: no cover
    __version__ = "0.0.0"

__author__ = "tlan developers"
__license__ = "MIT"
__description__ = "Collective routing on temporal load-aware road networks"
