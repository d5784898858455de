from __future__ import annotations

"""Unified type exports for public consumption.

Types stay owned by their domain modules (`phase_types.py`, `graph.py`,
`priors`, `evaluation`); this module only gathers them in one place.
"""

from evaluation.metrics import EvalReport, VideoScore
from evaluation.segments import Segment
from formats.dataset import VideoRecord
from graph import ChainGraph, TridiagonalMatrix, WeightConvention
from phase_types import (
    FeatureSequence,
    LabelSequence,
    PriorMatrix,
    ProbabilityMatrix,
    TimestampSet,
)
from pipelines.segmentation import SegmentationResult
from priors.fewshot import FewShotModel, GaussianPhaseModel, TemporalHistogram

__all__ = [
    "FeatureSequence",
    "LabelSequence",
    "TimestampSet",
    "PriorMatrix",
    "ProbabilityMatrix",
    "WeightConvention",
    "TridiagonalMatrix",
    "ChainGraph",
    "GaussianPhaseModel",
    "TemporalHistogram",
    "FewShotModel",
    "Segment",
    "VideoScore",
    "EvalReport",
    "VideoRecord",
    "SegmentationResult",
]
