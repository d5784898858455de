from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from errors import DimensionMismatch, InvalidHyperparameters
from graph import (
    DEFAULT_WEIGHT_CONVENTION,
    WEIGHT_CONVENTIONS,
    ChainGraph,
    WeightConvention,
    build_chain_graph,
)
from phase_types import FeatureSequence, Hyperparameters, LabelSequence, PriorMatrix, ProbabilityMatrix
from priors.base import PriorBuilder
from solver import apply_correction, decode, solve_all_phases

logger = logging.getLogger(__name__)

THREADS_ENV_VAR = "PHASE_WALK_THREADS"
DEFAULT_THREADS = 1


def resolve_max_workers(explicit: int | None = None) -> int:
    """Explicit value first, then ``PHASE_WALK_THREADS``, then 1."""
    if explicit is not None:
        if explicit < 1:
            raise InvalidHyperparameters(f"max_workers must be at least 1, got {explicit}")
        return explicit
    env_value = os.getenv(THREADS_ENV_VAR, "").strip()
    if env_value:
        try:
            value = int(env_value)
        except ValueError:
            raise InvalidHyperparameters(
                f"{THREADS_ENV_VAR} must be a positive integer, got {env_value!r}"
            ) from None
        if value < 1:
            raise InvalidHyperparameters(f"{THREADS_ENV_VAR} must be a positive integer, got {value}")
        return value
    return DEFAULT_THREADS


@dataclass(frozen=True)
class SegmentationConfig:
    hyperparameters: Hyperparameters = field(default_factory=Hyperparameters)
    weight_convention: WeightConvention = DEFAULT_WEIGHT_CONVENTION
    apply_correction: bool = True  # off: argmax of the raw solution
    normalize_spatial: bool = True
    max_workers: int | None = None

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        self.hyperparameters.validate()
        if self.weight_convention not in WEIGHT_CONVENTIONS:
            raise InvalidHyperparameters(
                f"unknown weight convention {self.weight_convention!r}; expected one of {WEIGHT_CONVENTIONS}"
            )
        if self.max_workers is not None and self.max_workers < 1:
            raise InvalidHyperparameters(f"max_workers must be at least 1, got {self.max_workers}")

    @property
    def beta(self) -> float:
        return self.hyperparameters.beta

    @property
    def gamma(self) -> float:
        return self.hyperparameters.gamma

    def with_hyperparameters(self, hyperparameters: Hyperparameters) -> "SegmentationConfig":
        return SegmentationConfig(
            hyperparameters=hyperparameters,
            weight_convention=self.weight_convention,
            apply_correction=self.apply_correction,
            normalize_spatial=self.normalize_spatial,
            max_workers=self.max_workers,
        )


@dataclass(frozen=True)
class SegmentationResult:
    labels: LabelSequence
    probabilities: ProbabilityMatrix
    graph: ChainGraph
    prior: PriorMatrix


def segment_with_prior(
    features: FeatureSequence,
    prior: PriorMatrix,
    config: SegmentationConfig | None = None,
) -> SegmentationResult:
    """Weights, Laplacian, per-phase solves, correction and arg-max for one video."""
    config = config or SegmentationConfig()
    if prior.frames != features.frames:
        raise DimensionMismatch(f"prior covers {prior.frames} frames, video has {features.frames}")
    empty = prior.empty_rows()
    if empty:
        logger.warning(f"[Segment] prior rows {empty} are all zero; those phases can only win ties")
    graph = build_chain_graph(features, beta=config.beta, convention=config.weight_convention)
    probabilities = solve_all_phases(
        graph.laplacian(),
        config.gamma,
        prior,
        max_workers=config.max_workers,
    )
    if config.apply_correction:
        probabilities = apply_correction(probabilities)
    labels = decode(probabilities)
    return SegmentationResult(labels=labels, probabilities=probabilities, graph=graph, prior=prior)


class RandomWalkSegmenter:
    """Segments videos with priors from one ``PriorBuilder`` (timestamps or few-shot)."""

    def __init__(self, prior_builder: PriorBuilder, config: SegmentationConfig | None = None) -> None:
        self._prior_builder = prior_builder
        self._config = config or SegmentationConfig()

    @property
    def config(self) -> SegmentationConfig:
        return self._config

    @property
    def num_phases(self) -> int:
        return self._prior_builder.num_phases

    def run(self, features: FeatureSequence) -> SegmentationResult:
        prior = self._prior_builder.build(features)
        logger.info(
            f"[Segment] T={features.frames}, M={features.dim}, S={prior.num_phases}, "
            f"beta={self._config.beta:g}, gamma={self._config.gamma:g}, "
            f"convention={self._config.weight_convention}"
        )
        return segment_with_prior(features, prior, self._config)


def segment_many(
    jobs: Sequence[tuple[PriorBuilder, FeatureSequence]],
    config: SegmentationConfig | None = None,
    max_workers: int | None = None,
) -> list[SegmentationResult]:
    """Run independent videos, in input order, optionally on a thread pool."""
    config = config or SegmentationConfig()
    workers = resolve_max_workers(max_workers)

    def _run(job: tuple[PriorBuilder, FeatureSequence]) -> SegmentationResult:
        builder, features = job
        return segment_with_prior(features, builder.build(features), config)

    if workers == 1 or len(jobs) < 2:
        return [_run(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run, jobs))


__all__ = [
    "THREADS_ENV_VAR",
    "resolve_max_workers",
    "SegmentationConfig",
    "SegmentationResult",
    "RandomWalkSegmenter",
    "segment_with_prior",
    "segment_many",
]
