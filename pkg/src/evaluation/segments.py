from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from phase_types import LabelSequence


@dataclass(frozen=True)
class Segment:
    """Maximal run of one phase, frames ``[start, end)``."""

    phase: int
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start >= self.end:
            raise ValueError(f"segment must be non-empty, got [{self.start}, {self.end})")

    @property
    def length(self) -> int:
        return self.end - self.start

    def iou(self, other: "Segment") -> float:
        intersection = min(self.end, other.end) - max(self.start, other.start)
        if intersection <= 0:
            return 0.0
        union = max(self.end, other.end) - min(self.start, other.start)
        return intersection / union


def segments_of(labels: LabelSequence) -> list[Segment]:
    values = labels.labels
    boundaries = np.flatnonzero(values[1:] != values[:-1]) + 1
    starts = np.concatenate(([0], boundaries))
    ends = np.concatenate((boundaries, [values.shape[0]]))
    return [
        Segment(phase=int(values[start]), start=int(start), end=int(end))
        for start, end in zip(starts, ends)
    ]


__all__ = ["Segment", "segments_of"]
