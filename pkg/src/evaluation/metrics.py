from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from errors import EmptyEvaluation, LengthMismatch, PhaseWalkError
from evaluation.segments import Segment, segments_of
from phase_types import LabelSequence

logger = logging.getLogger(__name__)

DEFAULT_OVERLAPS: tuple[float, ...] = (0.10, 0.25, 0.50)
# Slack for comparing averaged F1 values across thresholds.
MONOTONE_TOLERANCE = 1e-9


def overlap_key(overlap: float) -> str:
    """Report key for a threshold: ``0.1 -> "10"``."""
    return f"{overlap * 100:g}"


def _check_lengths(pred: LabelSequence, gt: LabelSequence) -> None:
    if pred.frames != gt.frames:
        raise LengthMismatch(pred.frames, gt.frames, what="prediction and ground truth")


def _check_overlap(overlap: float) -> None:
    if not 0.0 < overlap <= 1.0:
        raise PhaseWalkError(f"overlap threshold must lie in (0, 1], got {overlap}")


def frame_accuracy(pred: LabelSequence, gt: LabelSequence) -> float:
    _check_lengths(pred, gt)
    return float(np.mean(pred.labels == gt.labels))


def match_segments(
    predicted: Sequence[Segment],
    truth: Sequence[Segment],
    overlap: float,
) -> tuple[int, int, int]:
    """Greedy matching in temporal order of ``predicted``; returns ``(tp, fp, fn)``.

    Each predicted segment takes the unmatched same-phase ground-truth segment of
    highest IoU (earliest on ties) if that IoU reaches ``overlap``.
    """
    used = [False] * len(truth)
    tp = fp = 0
    for segment in predicted:
        best_iou = 0.0
        best_index = -1
        for index, candidate in enumerate(truth):
            if used[index] or candidate.phase != segment.phase:
                continue
            iou = segment.iou(candidate)
            if iou > best_iou:
                best_iou = iou
                best_index = index
        if best_index >= 0 and best_iou >= overlap:
            used[best_index] = True
            tp += 1
        else:
            fp += 1
    fn = len(truth) - sum(used)
    return tp, fp, fn


def f1_from_counts(tp: int, fp: int, fn: int) -> float:
    if tp + fp + fn == 0:
        return 100.0
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0:
        return 0.0
    return 200.0 * precision * recall / (precision + recall)


def segmental_f1(pred: LabelSequence, gt: LabelSequence, overlap: float) -> float:
    """Segmental F1 at IoU threshold ``overlap``, on a 0-100 scale."""
    _check_lengths(pred, gt)
    _check_overlap(overlap)
    return f1_from_counts(*match_segments(segments_of(pred), segments_of(gt), overlap))


@dataclass(frozen=True)
class VideoScore:
    video_id: str
    accuracy: float
    f1_at: dict[float, float]

    def to_dict(self) -> dict[str, Any]:
        return {
            "video": self.video_id,
            "accuracy": self.accuracy,
            "f1": {overlap_key(overlap): value for overlap, value in self.f1_at.items()},
        }


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    f1_at: dict[float, float]
    per_video: list[VideoScore] = field(default_factory=list)

    def f1(self, overlap: float) -> float:
        return self.f1_at[overlap]

    def to_dict(self) -> dict[str, Any]:
        return {
            "accuracy": self.accuracy,
            "f1": {overlap_key(overlap): value for overlap, value in self.f1_at.items()},
            "per_video": [score.to_dict() for score in self.per_video],
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "EvalReport":
        def _f1(raw: dict[str, Any]) -> dict[float, float]:
            return {float(key) / 100.0: float(value) for key, value in raw.items()}

        return cls(
            accuracy=float(payload["accuracy"]),
            f1_at=_f1(payload["f1"]),
            per_video=[
                VideoScore(str(item["video"]), float(item["accuracy"]), _f1(item["f1"]))
                for item in payload.get("per_video", [])
            ],
        )

    def summary(self) -> str:
        parts = [f"accuracy={self.accuracy:.4f}"]
        parts.extend(f"F1@{overlap_key(overlap)}={value:.2f}" for overlap, value in self.f1_at.items())
        return ", ".join(parts)


def _assert_monotone(f1_at: dict[float, float]) -> None:
    ordered = [f1_at[overlap] for overlap in sorted(f1_at)]
    for lower, higher in zip(ordered, ordered[1:]):
        assert higher <= lower + MONOTONE_TOLERANCE, (
            f"segmental F1 increased with the overlap threshold: {f1_at}"
        )


def evaluate(
    preds: Sequence[LabelSequence],
    gts: Sequence[LabelSequence],
    thresholds: Sequence[float] = DEFAULT_OVERLAPS,
    video_ids: Sequence[str] | None = None,
) -> EvalReport:
    """Unweighted per-video means of accuracy and segmental F1."""
    if not preds or not gts:
        raise EmptyEvaluation("nothing to evaluate")
    if len(preds) != len(gts):
        raise LengthMismatch(len(preds), len(gts), what="prediction and ground-truth lists")
    thresholds = tuple(float(overlap) for overlap in thresholds)
    for overlap in thresholds:
        _check_overlap(overlap)
    ids = list(video_ids) if video_ids is not None else [str(i) for i in range(len(preds))]
    if len(ids) != len(preds):
        raise LengthMismatch(len(ids), len(preds), what="video ids and predictions")

    scores: list[VideoScore] = []
    for video_id, pred, gt in zip(ids, preds, gts):
        scores.append(
            VideoScore(
                video_id=video_id,
                accuracy=frame_accuracy(pred, gt),
                f1_at={overlap: segmental_f1(pred, gt, overlap) for overlap in thresholds},
            )
        )
    report = EvalReport(
        accuracy=float(np.mean([score.accuracy for score in scores])),
        f1_at={
            overlap: float(np.mean([score.f1_at[overlap] for score in scores]))
            for overlap in thresholds
        },
        per_video=scores,
    )
    _assert_monotone(report.f1_at)
    logger.info(f"[Eval] {len(scores)} video(s): {report.summary()}")
    return report


__all__ = [
    "DEFAULT_OVERLAPS",
    "VideoScore",
    "EvalReport",
    "overlap_key",
    "frame_accuracy",
    "match_segments",
    "f1_from_counts",
    "segmental_f1",
    "evaluate",
]
