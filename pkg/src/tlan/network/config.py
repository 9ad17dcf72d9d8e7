# -*- coding: utf-8 -*-

from __future__ import annotations

__all__ = ["NetworkConfig"]

from typing import Any, Dict

from tlan.helpers import dataclass


@dataclass
class NetworkConfig:
    """Global time and capacity parameters of a road network

    All second-valued inputs are converted to interval units on ingestion, so
    that internally one interval has length ``1.0``.

    Args:
        interval_length_s: The length ``I`` of one discrete time interval in
            seconds.
        base_headway_s: The minimum safe gap ``η`` between two vehicles in
            seconds.
        transition_penalty_factor: The transition penalty ``ψ`` expressed as
            a fraction of the free-flow traversal time of an edge.
        horizon_intervals: The number of intervals ``T`` tracked by the load
            matrix.
        time_origin_s: The wall-clock time (in seconds) at which the first
            interval starts.
    """

    interval_length_s: float = 360.0
    base_headway_s: float = 3.0
    transition_penalty_factor: float = 0.5
    horizon_intervals: int = 48
    time_origin_s: float = 0.0

    def __post_init__(self) -> None:
        if not self.interval_length_s > 0:
            raise ValueError(
                "interval_length_s must be positive; got "
                f"{self.interval_length_s}"
            )
        if not self.base_headway_s > 0:
            raise ValueError(
                f"base_headway_s must be positive; got {self.base_headway_s}"
            )
        if not self.transition_penalty_factor >= 0:
            raise ValueError(
                "transition_penalty_factor must be non-negative; "
                f"got {self.transition_penalty_factor}"
            )
        if int(self.horizon_intervals) != self.horizon_intervals or (
            self.horizon_intervals < 1
        ):
            raise ValueError(
                "horizon_intervals must be a positive integer; "
                f"got {self.horizon_intervals}"
            )

    def to_intervals(self, seconds: float) -> float:
        """Convert a wall-clock time in seconds to interval units"""
        return (seconds - self.time_origin_s) / self.interval_length_s

    def to_seconds(self, intervals: float) -> float:
        return intervals * self.interval_length_s + self.time_origin_s

    def to_dict(self) -> Dict[str, Any]:
        return {
            "interval_length_s": float(self.interval_length_s),
            "base_headway_s": float(self.base_headway_s),
            "transition_penalty_factor": float(
                self.transition_penalty_factor
            ),
            "horizon_intervals": int(self.horizon_intervals),
            "time_origin_s": float(self.time_origin_s),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "NetworkConfig":
        known = {k: data[k] for k in cls().to_dict() if k in data}
        if "horizon_intervals" in known:
            known["horizon_intervals"] = int(known["horizon_intervals"])
        return cls(**known)
