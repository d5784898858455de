from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Protocol, Sequence

from errors import EmptyDataset, InvalidHyperparameters
from evaluation.metrics import DEFAULT_OVERLAPS, EvalReport, evaluate, overlap_key
from phase_types import FeatureSequence, Hyperparameters, LabelSequence
from pipelines.segmentation import SegmentationConfig, segment_many
from priors.base import PriorBuilder
from priors.fewshot import FewShotModel, FewShotPriorBuilder
from priors.timestamp import TimestampPriorBuilder, sample_timestamps

logger = logging.getLogger(__name__)


class AnnotatedVideo(Protocol):
    video_id: str
    features: FeatureSequence
    labels: LabelSequence


BuilderFactory = Callable[[int, AnnotatedVideo, Hyperparameters], PriorBuilder]


@dataclass(frozen=True)
class GridSpec:
    betas: tuple[float, ...] = (1.0, 2.5, 5.0, 7.5, 10.0)
    gammas: tuple[float, ...] = (1e-2, 1e-3, 1e-4)
    alphas: tuple[float, ...] = (0.4, 0.5, 0.6)

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if not self.betas or not self.gammas or not self.alphas:
            raise InvalidHyperparameters("every grid axis needs at least one value")
        for point in self.points(include_alpha=True):
            point.validate()

    def points(self, include_alpha: bool) -> list[Hyperparameters]:
        """Grid points in ``beta``-major order; without alpha the default alpha is kept."""
        alphas = self.alphas if include_alpha else (Hyperparameters().alpha,)
        return [
            Hyperparameters(beta=beta, gamma=gamma, alpha=alpha)
            for beta, gamma, alpha in itertools.product(self.betas, self.gammas, alphas)
        ]


@dataclass(frozen=True)
class GridPoint:
    hyperparameters: Hyperparameters
    report: EvalReport

    @property
    def accuracy(self) -> float:
        return self.report.accuracy

    def to_dict(self) -> dict[str, Any]:
        return {
            **self.hyperparameters.to_dict(),
            "accuracy": self.report.accuracy,
            "f1": {overlap_key(overlap): value for overlap, value in self.report.f1_at.items()},
        }


@dataclass(frozen=True)
class GridSearchResult:
    points: list[GridPoint] = field(default_factory=list)

    @property
    def best(self) -> GridPoint:
        return self.points[0]

    def to_dict(self) -> dict[str, Any]:
        return {
            "best": self.best.to_dict(),
            "points": [point.to_dict() for point in self.points],
        }


def timestamp_builders(k: int = 1, seed: int = 0) -> BuilderFactory:
    """Validation timestamps drawn from the ground truth, ``k`` per phase."""

    def _factory(index: int, video: AnnotatedVideo, _: Hyperparameters) -> PriorBuilder:
        return TimestampPriorBuilder(sample_timestamps(video.labels, k, seed + index))

    return _factory


def fewshot_builders(model: FewShotModel, normalize_spatial: bool = True) -> BuilderFactory:
    def _factory(_: int, __: AnnotatedVideo, hyperparameters: Hyperparameters) -> PriorBuilder:
        return FewShotPriorBuilder(model.with_alpha(hyperparameters.alpha), normalize_spatial)

    return _factory


def evaluate_setting(
    videos: Sequence[AnnotatedVideo],
    make_builder: BuilderFactory,
    config: SegmentationConfig,
) -> EvalReport:
    jobs = [
        (make_builder(index, video, config.hyperparameters), video.features)
        for index, video in enumerate(videos)
    ]
    results = segment_many(jobs, config, max_workers=config.max_workers)
    return evaluate(
        [result.labels for result in results],
        [video.labels for video in videos],
        DEFAULT_OVERLAPS,
        video_ids=[video.video_id for video in videos],
    )


def _rank_key(point: GridPoint) -> tuple[float, float]:
    f1_50 = point.report.f1_at.get(0.5, 0.0)
    return (-point.report.accuracy, -f1_50)


def grid_search(
    videos: Sequence[AnnotatedVideo],
    make_builder: BuilderFactory,
    grid: GridSpec | None = None,
    config: SegmentationConfig | None = None,
    include_alpha: bool = False,
) -> GridSearchResult:
    """Score every grid point on ``videos``; best accuracy first, ties by F1@50 then grid order."""
    if not videos:
        raise EmptyDataset("grid search needs at least one validation video")
    grid = grid or GridSpec()
    config = config or SegmentationConfig()
    points: list[GridPoint] = []
    for hyperparameters in grid.points(include_alpha):
        report = evaluate_setting(videos, make_builder, config.with_hyperparameters(hyperparameters))
        logger.info(
            f"[Grid] beta={hyperparameters.beta:g}, gamma={hyperparameters.gamma:g}, "
            f"alpha={hyperparameters.alpha:g}: {report.summary()}"
        )
        points.append(GridPoint(hyperparameters, report))
    # sorted() is stable, so equal keys keep grid order
    ranked = sorted(points, key=_rank_key)
    best = ranked[0].hyperparameters
    logger.info(
        f"[Grid] best: beta={best.beta:g}, gamma={best.gamma:g}, alpha={best.alpha:g} "
        f"(accuracy={ranked[0].accuracy:.4f})"
    )
    return GridSearchResult(points=ranked)


__all__ = [
    "AnnotatedVideo",
    "BuilderFactory",
    "GridSpec",
    "GridPoint",
    "GridSearchResult",
    "timestamp_builders",
    "fewshot_builders",
    "evaluate_setting",
    "grid_search",
]
