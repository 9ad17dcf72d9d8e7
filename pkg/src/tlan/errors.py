# -*- coding: utf-8 -*-
"""
Exceptions raised by ``tlan``. Everything derives from :class:`TlanError` so
that callers (and the command line interface) can catch failures coming from
the model in one place, while the input-validation errors also remain
``ValueError`` instances.
"""

from __future__ import annotations

__all__ = [
    "TlanError",
    "NetworkFormatError",
    "DanglingEndpointError",
    "QueryFormatError",
    "RoutingError",
    "NoPathError",
    "HorizonOverflowError",
    "LoadUnderflowError",
    "ManifestMismatchError",
]

from typing import Any, Optional


class TlanError(Exception):
    pass


class _FileFormatError(TlanError, ValueError):
    def __init__(
        self, message: str, *, path: Any = None, line: Optional[int] = None
    ):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(f"{where}{message}")


class NetworkFormatError(_FileFormatError):
    """A network file could not be parsed or describes an invalid network"""


class DanglingEndpointError(NetworkFormatError):
    """An edge references a node that is not part of the network"""


class QueryFormatError(_FileFormatError):
    """A query file could not be parsed or references unknown nodes"""


class RoutingError(TlanError):
    def __init__(self, message: str, *, query_id: Any = None):
        self.query_id = query_id
        super().__init__(message)


class NoPathError(RoutingError):
    """The destination cannot be reached from the source"""


class HorizonOverflowError(RoutingError):
    """A traversal would finish at or beyond the planning horizon"""


class LoadUnderflowError(TlanError, RuntimeError):
    """A load cell would become negative"""


class ManifestMismatchError(TlanError):
    """Runs being compared were produced from different inputs"""
