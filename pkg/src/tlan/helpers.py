# -*- coding: utf-8 -*-

from __future__ import annotations

__all__ = [
    "TIME_TOL",
    "NodeId",
    "EdgeId",
    "QueryId",
    "Cell",
    "dataclass",
    "significant",
    "file_sha256",
    "process_pool",
    "split_evenly",
]

import dataclasses
import hashlib
import math
import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from typing import (
    Any,
    Callable,
    Hashable,
    List,
    Sequence,
    Tuple,
    Type,
    TypeVar,
    Union,
)

# Absolute tolerance (in interval units) for every time comparison
TIME_TOL = 1e-9

NodeId = Hashable
EdgeId = Hashable
QueryId = Hashable
Cell = Tuple[Hashable, int]

_T = TypeVar("_T")


# This decorator is interpreted by static analysis tools as a hint
# that a decorator or metaclass causes dataclass-like behavior.
# See https://github.com/microsoft/pyright/blob/main/specs/dataclass_transforms.md
# for more information about the __dataclass_transform__ magic.
def __dataclass_transform__(
    *,
    eq_default: bool = True,
    order_default: bool = False,
    kw_only_default: bool = False,
    field_descriptors: Tuple[Union[type, Callable[..., Any]], ...] = (()),
) -> Callable[[_T], _T]:
    return lambda a: a


@__dataclass_transform__()
def dataclass(clz: Type[Any]) -> Type[Any]:
    """A frozen dataclass with a ``replace`` method

    Configuration and attribute records in ``tlan`` are immutable so that
    they can be shared freely, including with worker processes.
    """
    data_clz: Any = dataclasses.dataclass(frozen=True)(clz)

    def replace(self: Any, **updates: Any) -> Any:
        return dataclasses.replace(self, **updates)

    data_clz.replace = replace
    return data_clz


def significant(value: float, digits: int = 9) -> float:
    """Round a float to a fixed number of significant digits"""
    if not math.isfinite(value) or value == 0.0:
        return float(value)
    return float(f"{value:.{digits}g}")


def file_sha256(path: Any) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def process_pool(
    workers: int,
    initializer: Callable[..., None],
    initargs: Tuple[Any, ...] = (),
) -> ProcessPoolExecutor:
    """A pool of ``workers`` freshly spawned processes

    Each worker runs ``initializer(*initargs)`` once, which is where large
    read-only inputs such as the network are handed over.
    """
    return ProcessPoolExecutor(
        max_workers=workers,
        mp_context=mp.get_context("spawn"),
        initializer=initializer,
        initargs=initargs,
    )


def split_evenly(items: Sequence[_T], parts: int) -> List[Sequence[_T]]:
    """Split ``items`` into at most ``parts`` contiguous, non-empty chunks"""
    parts = max(1, min(parts, len(items)))
    size, extra = divmod(len(items), parts)
    chunks: List[Sequence[_T]] = []
    start = 0
    for i in range(parts):
        stop = start + size + (1 if i < extra else 0)
        chunks.append(items[start:stop])
        start = stop
    return [chunk for chunk in chunks if len(chunk)]
