from __future__ import annotations

"""Unified public API for phase-walk."""

from core import config, protocols, types
from errors import (
    AlreadyCorrected,
    BadMagic,
    DimensionMismatch,
    DuplicateFrame,
    EmptyDataset,
    EmptyEvaluation,
    EmptyPhase,
    FormatError,
    FrameOutOfRange,
    InsufficientSamples,
    InvalidHyperparameters,
    InvalidLabel,
    InvalidTimestampSet,
    LengthMismatch,
    MalformedDocument,
    MalformedRow,
    MissingHeader,
    NonFiniteEntry,
    NonPositiveWeight,
    NonPSDAfterShrinkage,
    PhaseWalkError,
    TooShort,
    TruncatedFile,
    VersionUnsupported,
    ZeroRow,
)
from evaluation import (
    DEFAULT_OVERLAPS,
    EvalReport,
    Segment,
    evaluate,
    frame_accuracy,
    segmental_f1,
    segments_of,
)
from formats import (
    load_dataset,
    read_features,
    read_labels,
    read_model,
    read_predictions,
    read_timestamps,
    split_ids,
    write_features,
    write_labels,
    write_model,
    write_predictions,
    write_timestamps,
)
from graph import ChainGraph, TridiagonalMatrix, build_chain_graph, build_laplacian, edge_weights
from phase_types import (
    FeatureSequence,
    Hyperparameters,
    LabelSequence,
    PriorMatrix,
    ProbabilityMatrix,
    TimestampSet,
    validate_feature_sequence,
)
from pipelines import (
    GridSpec,
    RandomWalkSegmenter,
    SegmentationConfig,
    SegmentationResult,
    grid_search,
    sweep_fewshot,
    sweep_timestamps,
)
from priors import (
    FewShotConfig,
    FewShotModel,
    FewShotPriorBuilder,
    TimestampPriorBuilder,
    fewshot_prior,
    fit_fewshot_model,
    fit_gaussians,
    fit_histogram,
    sample_timestamps,
    spatial_prior,
    temporal_prior,
    timestamp_prior,
)
from solver import apply_correction, decode, solve_all_phases, solve_phase
from synth import SynthConfig, generate_dataset, generate_video

__all__ = [
    "config",
    "protocols",
    "types",
    "PhaseWalkError",
    "NonFiniteEntry",
    "ZeroRow",
    "TooShort",
    "InvalidLabel",
    "InvalidTimestampSet",
    "InvalidHyperparameters",
    "NonPositiveWeight",
    "DimensionMismatch",
    "AlreadyCorrected",
    "FrameOutOfRange",
    "DuplicateFrame",
    "EmptyPhase",
    "InsufficientSamples",
    "NonPSDAfterShrinkage",
    "EmptyDataset",
    "LengthMismatch",
    "EmptyEvaluation",
    "FormatError",
    "BadMagic",
    "TruncatedFile",
    "VersionUnsupported",
    "MalformedRow",
    "MissingHeader",
    "MalformedDocument",
    "FeatureSequence",
    "LabelSequence",
    "TimestampSet",
    "PriorMatrix",
    "ProbabilityMatrix",
    "Hyperparameters",
    "validate_feature_sequence",
    "TridiagonalMatrix",
    "ChainGraph",
    "edge_weights",
    "build_laplacian",
    "build_chain_graph",
    "solve_phase",
    "solve_all_phases",
    "apply_correction",
    "decode",
    "timestamp_prior",
    "sample_timestamps",
    "TimestampPriorBuilder",
    "FewShotConfig",
    "FewShotModel",
    "FewShotPriorBuilder",
    "fit_gaussians",
    "fit_histogram",
    "fit_fewshot_model",
    "spatial_prior",
    "temporal_prior",
    "fewshot_prior",
    "Segment",
    "segments_of",
    "frame_accuracy",
    "segmental_f1",
    "evaluate",
    "EvalReport",
    "DEFAULT_OVERLAPS",
    "SynthConfig",
    "generate_video",
    "generate_dataset",
    "read_features",
    "write_features",
    "read_labels",
    "write_labels",
    "read_predictions",
    "write_predictions",
    "read_timestamps",
    "write_timestamps",
    "read_model",
    "write_model",
    "load_dataset",
    "split_ids",
    "SegmentationConfig",
    "SegmentationResult",
    "RandomWalkSegmenter",
    "GridSpec",
    "grid_search",
    "sweep_timestamps",
    "sweep_fewshot",
]
