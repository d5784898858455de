from __future__ import annotations

from . import metrics, segments
from .metrics import (
    DEFAULT_OVERLAPS,
    EvalReport,
    VideoScore,
    evaluate,
    f1_from_counts,
    frame_accuracy,
    match_segments,
    overlap_key,
    segmental_f1,
)
from .segments import Segment, segments_of

__all__ = [
    "metrics",
    "segments",
    "Segment",
    "segments_of",
    "DEFAULT_OVERLAPS",
    "EvalReport",
    "VideoScore",
    "overlap_key",
    "frame_accuracy",
    "match_segments",
    "f1_from_counts",
    "segmental_f1",
    "evaluate",
]
