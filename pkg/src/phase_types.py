from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np

from errors import (
    DimensionMismatch,
    DuplicateFrame,
    FrameOutOfRange,
    InvalidHyperparameters,
    InvalidLabel,
    InvalidTimestampSet,
    NonFiniteEntry,
    PhaseWalkError,
    TooShort,
    ZeroRow,
)

# Corrected column sums must match 1 within this bound times max(1, max|x|);
# entries of order one therefore get the flat bound.
CORRECTION_TOLERANCE = 1e-12


def _frozen_array(values: Any, dtype: Any) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class FeatureSequence:
    """Per-frame feature vectors of one video, shape ``(frames, dim)``, float64."""

    data: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "data", _frozen_array(self.data, np.float64))
        self.validate()

    @property
    def frames(self) -> int:
        return int(self.data.shape[0])

    @property
    def dim(self) -> int:
        return int(self.data.shape[1])

    def validate(self) -> None:
        data = self.data
        if data.ndim != 2:
            raise DimensionMismatch(f"features must be a 2-D matrix, got {data.ndim}-D")
        if data.shape[1] < 1:
            raise DimensionMismatch("features must have at least one column")
        if data.shape[0] < 2:
            raise TooShort(int(data.shape[0]))
        finite = np.isfinite(data)
        if not finite.all():
            frame, column = np.argwhere(~finite)[0]
            raise NonFiniteEntry(int(frame), int(column))
        zero_rows = np.flatnonzero(~data.any(axis=1))
        if zero_rows.size:
            raise ZeroRow(int(zero_rows[0]))


def validate_feature_sequence(raw: Any) -> FeatureSequence:
    try:
        array = np.asarray(raw, dtype=np.float64)
    except ValueError as exc:
        # ragged nested lists end up here
        raise DimensionMismatch(f"features must be rectangular: {exc}") from exc
    return FeatureSequence(array)


@dataclass(frozen=True)
class LabelSequence:
    labels: np.ndarray
    num_phases: int

    def __post_init__(self) -> None:
        raw = np.asarray(self.labels)
        if raw.size and not np.issubdtype(raw.dtype, np.integer):
            if not np.all(np.equal(np.mod(raw, 1), 0)):
                raise InvalidLabel("labels must be integer phase ids")
        object.__setattr__(self, "labels", _frozen_array(raw, np.int64))
        object.__setattr__(self, "num_phases", int(self.num_phases))
        self.validate()

    @classmethod
    def from_list(cls, labels: Sequence[int], num_phases: int | None = None) -> "LabelSequence":
        values = list(labels)
        if num_phases is None:
            num_phases = (max(values) + 1) if values else 1
        return cls(np.asarray(values, dtype=np.int64), num_phases)

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    @property
    def frames(self) -> int:
        return len(self)

    def validate(self) -> None:
        if self.labels.ndim != 1:
            raise InvalidLabel("labels must be a 1-D vector")
        if self.num_phases < 1:
            raise InvalidLabel("num_phases must be at least 1")
        if self.labels.shape[0] < 1:
            raise InvalidLabel("label sequence must contain at least one frame")
        if (self.labels < 0).any():
            raise InvalidLabel("labels must be non-negative")
        if (self.labels >= self.num_phases).any():
            bad = int(self.labels[self.labels >= self.num_phases][0])
            raise InvalidLabel(f"label {bad} is not below num_phases={self.num_phases}")

    def to_list(self) -> list[int]:
        return [int(value) for value in self.labels]


@dataclass(frozen=True)
class TimestampSet:
    """Sparse annotation: ``(frame, phase)`` pairs with unique frames."""

    entries: tuple[tuple[int, int], ...]
    num_phases: int

    def __post_init__(self) -> None:
        normalized = tuple(sorted((int(frame), int(phase)) for frame, phase in self.entries))
        object.__setattr__(self, "entries", normalized)
        object.__setattr__(self, "num_phases", int(self.num_phases))
        self.validate()

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]], num_phases: int) -> "TimestampSet":
        entries: list[tuple[int, int]] = []
        for pair in pairs:
            if len(pair) != 2:
                raise InvalidTimestampSet(f"timestamp entry must be [frame, phase], got {pair!r}")
            entries.append((int(pair[0]), int(pair[1])))
        return cls(tuple(entries), num_phases)

    def validate(self) -> None:
        if self.num_phases < 1:
            raise InvalidTimestampSet("num_phases must be at least 1")
        seen: set[int] = set()
        for frame, phase in self.entries:
            if frame < 0:
                raise InvalidTimestampSet(f"timestamp frame {frame} is negative")
            if not 0 <= phase < self.num_phases:
                raise InvalidTimestampSet(
                    f"timestamp phase {phase} outside [0, {self.num_phases})"
                )
            if frame in seen:
                raise DuplicateFrame(frame)
            seen.add(frame)

    def __len__(self) -> int:
        return len(self.entries)

    def frames_of(self, phase: int) -> list[int]:
        return [frame for frame, value in self.entries if value == phase]

    def check_frames(self, frames: int) -> None:
        """Raise ``FrameOutOfRange`` unless every annotated frame lies in ``[0, frames)``."""
        # entries are sorted by frame and never negative
        if self.entries and self.entries[-1][0] >= frames:
            raise FrameOutOfRange(self.entries[-1][0], frames)

    def missing_phases(self) -> list[int]:
        present = {phase for _, phase in self.entries}
        return [phase for phase in range(self.num_phases) if phase not in present]

    @property
    def covers_all_phases(self) -> bool:
        return not self.missing_phases()


@dataclass(frozen=True)
class PriorMatrix:
    """``values[s, t]`` is the prior evidence for phase ``s`` at frame ``t``."""

    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _frozen_array(self.values, np.float64))
        if self.values.ndim != 2:
            raise DimensionMismatch("prior must be an S x T matrix")
        if not np.isfinite(self.values).all():
            raise PhaseWalkError("prior entries must be finite")
        if (self.values < 0).any():
            raise PhaseWalkError("prior entries must be non-negative")

    @property
    def num_phases(self) -> int:
        return int(self.values.shape[0])

    @property
    def frames(self) -> int:
        return int(self.values.shape[1])

    def empty_rows(self) -> list[int]:
        return [int(s) for s in np.flatnonzero(~self.values.any(axis=1))]


@dataclass(frozen=True)
class ProbabilityMatrix:
    values: np.ndarray
    corrected: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _frozen_array(self.values, np.float64))
        if self.values.ndim != 2 or self.values.shape[0] < 1 or self.values.shape[1] < 1:
            raise DimensionMismatch("probabilities must be a non-empty S x T matrix")
        if not np.isfinite(self.values).all():
            raise PhaseWalkError("probability entries must be finite")
        if self.corrected:
            deviation = np.abs(self.values.sum(axis=0) - 1.0).max()
            # rounding in the column sum grows with the entry magnitude
            scale = max(1.0, float(np.abs(self.values).max()))
            if deviation > CORRECTION_TOLERANCE * scale:
                raise PhaseWalkError(
                    f"corrected columns must sum to 1 (max deviation {deviation:.3e})"
                )

    @property
    def num_phases(self) -> int:
        return int(self.values.shape[0])

    @property
    def frames(self) -> int:
        return int(self.values.shape[1])


@dataclass(frozen=True)
class Hyperparameters:
    beta: float = 5.0
    gamma: float = 1e-3
    alpha: float = 0.5

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if not (np.isfinite(self.beta) and self.beta > 0):
            raise InvalidHyperparameters(f"beta must be positive, got {self.beta}")
        if not (np.isfinite(self.gamma) and self.gamma > 0):
            raise InvalidHyperparameters(f"gamma must be positive, got {self.gamma}")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidHyperparameters(f"alpha must lie in (0, 1), got {self.alpha}")

    def to_dict(self) -> dict[str, float]:
        return {"beta": self.beta, "gamma": self.gamma, "alpha": self.alpha}

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "Hyperparameters":
        defaults = cls()
        return cls(
            beta=float(payload.get("beta", defaults.beta)),
            gamma=float(payload.get("gamma", defaults.gamma)),
            alpha=float(payload.get("alpha", defaults.alpha)),
        )


__all__ = [
    "CORRECTION_TOLERANCE",
    "FeatureSequence",
    "LabelSequence",
    "TimestampSet",
    "PriorMatrix",
    "ProbabilityMatrix",
    "Hyperparameters",
    "validate_feature_sequence",
]
