from __future__ import annotations

"""Unified config exports for public consumption."""

from phase_types import Hyperparameters
from pipelines.segmentation import THREADS_ENV_VAR, SegmentationConfig, resolve_max_workers
from pipelines.tuning import GridSpec
from priors.fewshot import FewShotConfig
from synth.generator import SynthConfig

__all__ = [
    "Hyperparameters",
    "SegmentationConfig",
    "FewShotConfig",
    "GridSpec",
    "SynthConfig",
    "THREADS_ENV_VAR",
    "resolve_max_workers",
]
