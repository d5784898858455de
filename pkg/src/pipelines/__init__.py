from __future__ import annotations

from pipelines.experiments import SweepPoint, sweep_fewshot, sweep_timestamps
from pipelines.segmentation import (
    THREADS_ENV_VAR,
    RandomWalkSegmenter,
    SegmentationConfig,
    SegmentationResult,
    resolve_max_workers,
    segment_many,
    segment_with_prior,
)
from pipelines.tuning import (
    GridPoint,
    GridSearchResult,
    GridSpec,
    evaluate_setting,
    fewshot_builders,
    grid_search,
    timestamp_builders,
)

__all__ = [
    "THREADS_ENV_VAR",
    "SegmentationConfig",
    "SegmentationResult",
    "RandomWalkSegmenter",
    "resolve_max_workers",
    "segment_with_prior",
    "segment_many",
    "GridSpec",
    "GridPoint",
    "GridSearchResult",
    "timestamp_builders",
    "fewshot_builders",
    "evaluate_setting",
    "grid_search",
    "SweepPoint",
    "sweep_timestamps",
    "sweep_fewshot",
]
