from __future__ import annotations

from . import base, fewshot, timestamp
from .base import PriorBuilder, time_bins
from .fewshot import (
    FewShotConfig,
    FewShotModel,
    FewShotPriorBuilder,
    GaussianPhaseModel,
    TemporalHistogram,
    fewshot_prior,
    fit_fewshot_model,
    fit_gaussians,
    fit_histogram,
    log_spatial_prior,
    spatial_prior,
    temporal_prior,
)
from .timestamp import TimestampPriorBuilder, sample_timestamps, timestamp_prior

__all__ = [
    "base",
    "fewshot",
    "timestamp",
    "PriorBuilder",
    "time_bins",
    "TimestampPriorBuilder",
    "timestamp_prior",
    "sample_timestamps",
    "FewShotConfig",
    "FewShotModel",
    "FewShotPriorBuilder",
    "GaussianPhaseModel",
    "TemporalHistogram",
    "fit_gaussians",
    "fit_histogram",
    "fit_fewshot_model",
    "spatial_prior",
    "log_spatial_prior",
    "temporal_prior",
    "fewshot_prior",
]
