from __future__ import annotations

"""Multi-seed sweeps over the amount of supervision.

Timestamp sweeps vary the number of annotated frames per phase; few-shot sweeps
vary the number of fully labelled training videos. Each setting is repeated
over several seeds and summarized by mean and standard deviation.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from errors import EmptyDataset, PhaseWalkError
from evaluation.metrics import EvalReport, overlap_key
from pipelines.segmentation import SegmentationConfig
from pipelines.tuning import AnnotatedVideo, evaluate_setting, fewshot_builders, timestamp_builders
from priors.fewshot import FewShotConfig, fit_fewshot_model

logger = logging.getLogger(__name__)

DEFAULT_K_VALUES = tuple(range(1, 11))
DEFAULT_N_VALUES = (5, 10, 15, 20, 40)


@dataclass(frozen=True)
class SweepPoint:
    setting: int
    accuracy_mean: float
    accuracy_std: float
    f1_mean: dict[float, float]
    f1_std: dict[float, float]
    runs: int = 0
    reports: list[EvalReport] = field(default_factory=list, repr=False, compare=False)

    @classmethod
    def from_reports(cls, setting: int, reports: Sequence[EvalReport]) -> "SweepPoint":
        accuracies = np.array([report.accuracy for report in reports])
        overlaps = list(reports[0].f1_at)
        f1 = {overlap: np.array([report.f1_at[overlap] for report in reports]) for overlap in overlaps}
        return cls(
            setting=setting,
            accuracy_mean=float(accuracies.mean()),
            accuracy_std=float(accuracies.std()),
            f1_mean={overlap: float(values.mean()) for overlap, values in f1.items()},
            f1_std={overlap: float(values.std()) for overlap, values in f1.items()},
            runs=len(reports),
            reports=list(reports),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "setting": self.setting,
            "runs": self.runs,
            "accuracy_mean": self.accuracy_mean,
            "accuracy_std": self.accuracy_std,
            "f1_mean": {overlap_key(o): value for o, value in self.f1_mean.items()},
            "f1_std": {overlap_key(o): value for o, value in self.f1_std.items()},
        }


def _check_seeds(seeds: Sequence[int]) -> None:
    if not seeds:
        raise PhaseWalkError("at least one seed is required")


def sweep_timestamps(
    videos: Sequence[AnnotatedVideo],
    k_values: Sequence[int] = DEFAULT_K_VALUES,
    seeds: Sequence[int] = (0, 1, 2),
    config: SegmentationConfig | None = None,
) -> list[SweepPoint]:
    """For each ``K``, sample ``K`` timestamps per phase per video with every seed."""
    if not videos:
        raise EmptyDataset("timestamp sweep needs at least one video")
    _check_seeds(seeds)
    config = config or SegmentationConfig()
    points: list[SweepPoint] = []
    for k in k_values:
        reports = []
        for seed in seeds:
            # per-video seeds seed*len+index never collide across seeds
            builders = timestamp_builders(k=k, seed=seed * len(videos))
            reports.append(evaluate_setting(videos, builders, config))
        point = SweepPoint.from_reports(k, reports)
        logger.info(
            f"[Sweep] K={k}: accuracy={point.accuracy_mean:.4f}±{point.accuracy_std:.4f} "
            f"over {point.runs} seed(s)"
        )
        points.append(point)
    return points


def sweep_fewshot(
    train: Sequence[AnnotatedVideo],
    test: Sequence[AnnotatedVideo],
    n_values: Sequence[int] = DEFAULT_N_VALUES,
    seeds: Sequence[int] = (0, 1, 2),
    config: SegmentationConfig | None = None,
    fewshot: FewShotConfig | None = None,
    num_phases: int | None = None,
) -> list[SweepPoint]:
    """For each ``N``, fit on ``N`` training videos drawn per seed and score ``test``."""
    if not train or not test:
        raise EmptyDataset("few-shot sweep needs training and test videos")
    _check_seeds(seeds)
    config = config or SegmentationConfig()
    fewshot = fewshot or FewShotConfig(alpha=config.hyperparameters.alpha)
    num_phases = num_phases or max(video.labels.num_phases for video in [*train, *test])
    points: list[SweepPoint] = []
    for n in n_values:
        if not 1 <= n <= len(train):
            raise PhaseWalkError(f"N={n} outside [1, {len(train)}] available training videos")
        reports = []
        for seed in seeds:
            chosen = np.sort(np.random.default_rng(seed).choice(len(train), size=n, replace=False))
            subset = [(train[i].features, train[i].labels) for i in chosen]
            model = fit_fewshot_model(subset, num_phases, fewshot)
            builders = fewshot_builders(model, normalize_spatial=fewshot.normalize_spatial)
            reports.append(evaluate_setting(test, builders, config))
        point = SweepPoint.from_reports(n, reports)
        logger.info(
            f"[Sweep] N={n}: accuracy={point.accuracy_mean:.4f}±{point.accuracy_std:.4f} "
            f"over {point.runs} seed(s)"
        )
        points.append(point)
    return points


__all__ = [
    "DEFAULT_K_VALUES",
    "DEFAULT_N_VALUES",
    "SweepPoint",
    "sweep_timestamps",
    "sweep_fewshot",
]
