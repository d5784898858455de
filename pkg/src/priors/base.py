from __future__ import annotations

from typing import Protocol

import numpy as np

from phase_types import FeatureSequence, PriorMatrix


class PriorBuilder(Protocol):
    """Produces the S x T prior matrix for one test video."""

    @property
    def num_phases(self) -> int:
        ...

    def build(self, features: FeatureSequence) -> PriorMatrix:
        ...


def time_bins(frames: int, n_bins: int) -> np.ndarray:
    """Map frame ``t`` of a ``frames``-long video to bin ``floor(t * n_bins / frames)``."""
    if frames < 1 or n_bins < 1:
        raise ValueError("frames and n_bins must be positive")
    t = np.arange(frames, dtype=np.int64)
    return np.minimum((t * n_bins) // frames, n_bins - 1)


__all__ = [
    "PriorBuilder",
    "time_bins",
]
