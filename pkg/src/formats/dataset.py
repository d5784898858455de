from __future__ import annotations

"""Dataset directories: ``<root>/<video_id>.features`` next to ``<root>/<video_id>.labels.csv``."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence, TypeVar

import numpy as np

from errors import EmptyDataset, FormatError, PhaseWalkError
from formats.features import FEATURE_SUFFIX, read_features, write_features
from formats.tables import LABEL_SUFFIX, read_labels, write_labels
from phase_types import FeatureSequence, LabelSequence

logger = logging.getLogger(__name__)

T = TypeVar("T")

DEFAULT_SPLIT_FRACTIONS = (40, 8, 32)


@dataclass(frozen=True)
class VideoRecord:
    video_id: str
    features: FeatureSequence
    labels: LabelSequence


def _stem(path: Path, suffix: str) -> str:
    return path.name[: -len(suffix)]


def feature_paths(root: str | Path) -> dict[str, Path]:
    root = Path(root)
    if not root.is_dir():
        raise FormatError(f"{root}: not a directory")
    return {
        _stem(path, FEATURE_SUFFIX): path
        for path in sorted(root.iterdir())
        if path.is_file() and path.name.endswith(FEATURE_SUFFIX)
    }


def list_video_ids(root: str | Path) -> list[str]:
    """Ids with both a feature file and a label file; a lone file is an error."""
    root = Path(root)
    features = feature_paths(root)
    labels = {
        _stem(path, LABEL_SUFFIX): path
        for path in sorted(root.iterdir())
        if path.is_file() and path.name.endswith(LABEL_SUFFIX)
    }
    for video_id in sorted(set(features) ^ set(labels)):
        lone = features.get(video_id) or labels[video_id]
        raise FormatError(f"{lone}: no matching {'labels' if video_id in features else 'features'} file")
    return sorted(features)


def read_with_context(path: Path, reader: Callable[..., T], **kwargs: Any) -> T:
    """Run ``reader(path)``; content errors are re-raised as ``FormatError`` naming the file."""
    try:
        return reader(path, **kwargs)
    except FormatError:
        raise
    except PhaseWalkError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def load_video(root: str | Path, video_id: str, num_phases: int | None = None) -> VideoRecord:
    root = Path(root)
    features_path = root / f"{video_id}{FEATURE_SUFFIX}"
    labels_path = root / f"{video_id}{LABEL_SUFFIX}"
    features = read_with_context(features_path, read_features)
    labels = read_with_context(labels_path, read_labels, num_phases=num_phases)
    if features.frames != labels.frames:
        raise FormatError(
            f"{labels_path}: {labels.frames} label rows but {features.frames} feature frames"
        )
    return VideoRecord(video_id, features, labels)


def load_dataset(root: str | Path, num_phases: int | None = None) -> list[VideoRecord]:
    """Load every paired video; ``num_phases`` defaults to the largest label seen plus one."""
    root = Path(root)
    ids = list_video_ids(root)
    if not ids:
        raise EmptyDataset(f"{root}: no '<id>{FEATURE_SUFFIX}' + '<id>{LABEL_SUFFIX}' pairs")
    records = [load_video(root, video_id, num_phases) for video_id in ids]
    if num_phases is None:
        num_phases = max(record.labels.num_phases for record in records)
        records = [
            VideoRecord(record.video_id, record.features, LabelSequence(record.labels.labels, num_phases))
            for record in records
        ]
    logger.info(f"[Dataset] loaded {len(records)} video(s) from {root} (S={num_phases})")
    return records


def save_video(root: str | Path, video_id: str, features: FeatureSequence, labels: LabelSequence) -> None:
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    write_features(features, root / f"{video_id}{FEATURE_SUFFIX}")
    write_labels(labels, root / f"{video_id}{LABEL_SUFFIX}")


def split_ids(
    ids: Sequence[str],
    fractions: Sequence[float] = DEFAULT_SPLIT_FRACTIONS,
    seed: int = 0,
) -> list[list[str]]:
    """Shuffle ``ids`` and cut them into consecutive parts proportional to ``fractions``.

    Part sizes are rounded down with the remainder going to the earliest parts, so
    ``(40, 8, 32)`` over 80 ids gives exactly 40/8/32.
    """
    weights = np.asarray(fractions, dtype=np.float64)
    if weights.ndim != 1 or weights.size == 0 or (weights < 0).any() or weights.sum() <= 0:
        raise PhaseWalkError("split fractions must be non-negative with a positive sum")
    ordered = sorted(ids)
    shuffled = [ordered[i] for i in np.random.default_rng(seed).permutation(len(ordered))]
    raw = weights / weights.sum() * len(shuffled)
    sizes = np.floor(raw).astype(np.int64)
    sizes[: len(shuffled) - int(sizes.sum())] += 1
    parts: list[list[str]] = []
    start = 0
    for size in sizes:
        parts.append(shuffled[start : start + int(size)])
        start += int(size)
    return parts


__all__ = [
    "DEFAULT_SPLIT_FRACTIONS",
    "VideoRecord",
    "feature_paths",
    "list_video_ids",
    "load_video",
    "read_with_context",
    "load_dataset",
    "save_video",
    "split_ids",
]
