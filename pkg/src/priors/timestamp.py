from __future__ import annotations

import logging

import numpy as np

from errors import DimensionMismatch, EmptyPhase, InvalidTimestampSet
from phase_types import FeatureSequence, LabelSequence, PriorMatrix, TimestampSet

logger = logging.getLogger(__name__)


def timestamp_prior(ts: TimestampSet, frames: int, num_phases: int) -> PriorMatrix:
    """Indicator prior: ``z[s, t] = 1`` iff frame ``t`` is annotated with phase ``s``."""
    if ts.num_phases != num_phases:
        raise DimensionMismatch(
            f"timestamp set declares {ts.num_phases} phases, expected {num_phases}"
        )
    ts.check_frames(frames)
    values = np.zeros((num_phases, frames), dtype=np.float64)
    for frame, phase in ts.entries:
        values[phase, frame] = 1.0

    missing = ts.missing_phases()
    if missing:
        logger.warning(
            f"[Timestamps] no timestamp for phase(s) {missing}; their prior rows are zero"
        )
    return PriorMatrix(values)


def sample_timestamps(
    labels: LabelSequence,
    k: int,
    seed: int,
    require_all_phases: bool = False,
) -> TimestampSet:
    """Draw ``min(k, n_s)`` frames per phase uniformly without replacement.

    Phases absent from the video are skipped with a warning unless
    ``require_all_phases`` is set, in which case ``EmptyPhase`` is raised.
    """
    if k < 1:
        raise InvalidTimestampSet(f"k must be at least 1, got {k}")
    rng = np.random.default_rng(seed)
    entries: list[tuple[int, int]] = []
    skipped: list[int] = []
    for phase in range(labels.num_phases):
        candidates = np.flatnonzero(labels.labels == phase)
        if candidates.size == 0:
            if require_all_phases:
                raise EmptyPhase(phase)
            skipped.append(phase)
            continue
        chosen = rng.choice(candidates, size=min(k, candidates.size), replace=False)
        entries.extend((int(frame), phase) for frame in chosen)

    if skipped:
        logger.warning(f"[Timestamps] phase(s) {skipped} absent from the video; skipped")
    logger.debug(f"[Timestamps] sampled {len(entries)} timestamp(s), k={k}, seed={seed}")
    return TimestampSet(tuple(entries), labels.num_phases)


class TimestampPriorBuilder:
    def __init__(self, timestamps: TimestampSet) -> None:
        self._timestamps = timestamps

    @property
    def num_phases(self) -> int:
        return self._timestamps.num_phases

    @property
    def timestamps(self) -> TimestampSet:
        return self._timestamps

    def build(self, features: FeatureSequence) -> PriorMatrix:
        return timestamp_prior(self._timestamps, features.frames, self.num_phases)


__all__ = [
    "timestamp_prior",
    "sample_timestamps",
    "TimestampPriorBuilder",
]
