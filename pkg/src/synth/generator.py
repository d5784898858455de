from __future__ import annotations

"""Synthetic surgical-like videos.

Each video runs through phases ``0..S-1`` once, in order. Frame features are
drawn around per-phase means placed on a centred regular simplex, so every pair
of phase means is ``separation * noise`` apart. The noise vector is isotropic
with root-mean-square norm ``noise``.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from errors import InvalidHyperparameters
from phase_types import FeatureSequence, LabelSequence

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SynthConfig:
    num_phases: int = 7
    dim: int = 16
    num_videos: int = 10
    min_frames: int = 1800
    max_frames: int = 2200
    separation: float = 6.0
    noise: float = 1.0
    duration_sigma: float = 0.25
    duration_min_ratio: float = 0.5
    duration_max_ratio: float = 2.0
    seed: int = 0

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if self.num_phases < 2:
            raise InvalidHyperparameters(f"num_phases must be at least 2, got {self.num_phases}")
        if self.dim < 2:
            raise InvalidHyperparameters(f"dim must be at least 2, got {self.dim}")
        if self.num_videos < 1:
            raise InvalidHyperparameters(f"num_videos must be at least 1, got {self.num_videos}")
        if self.min_frames < self.num_phases:
            raise InvalidHyperparameters(
                f"min_frames ({self.min_frames}) must be at least num_phases ({self.num_phases})"
            )
        if self.max_frames < self.min_frames:
            raise InvalidHyperparameters("max_frames must not be below min_frames")
        # zero separation is allowed: every phase then shares one distribution
        if not (np.isfinite(self.separation) and self.separation >= 0):
            raise InvalidHyperparameters(f"separation must be non-negative, got {self.separation}")
        if not (np.isfinite(self.noise) and self.noise > 0):
            raise InvalidHyperparameters(f"noise must be positive, got {self.noise}")
        if self.duration_sigma < 0:
            raise InvalidHyperparameters("duration_sigma must be non-negative")
        if not 0 < self.duration_min_ratio <= 1.0 <= self.duration_max_ratio:
            raise InvalidHyperparameters("duration ratios must satisfy 0 < min <= 1 <= max")
        if self.seed < 0:
            raise InvalidHyperparameters(f"seed must be non-negative, got {self.seed}")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "SynthConfig":
        known = {key: payload[key] for key in cls.__dataclass_fields__ if key in payload}
        return cls(**known)


@dataclass(frozen=True)
class SyntheticVideo:
    video_id: str
    features: FeatureSequence
    labels: LabelSequence


def phase_means(cfg: SynthConfig) -> np.ndarray:
    """``S x M`` phase means; depends on ``cfg.seed`` only."""
    rng = np.random.default_rng(cfg.seed)
    S, M = cfg.num_phases, cfg.dim
    # scaled centred basis vectors e_s - 1/S are pairwise sqrt(2) apart
    scale = cfg.separation * cfg.noise / np.sqrt(2.0)
    if M >= S:
        basis, _ = np.linalg.qr(rng.standard_normal((M, S)))
        return scale * (np.eye(S) - 1.0 / S) @ basis.T
    # not enough room for a regular simplex: random unit directions instead
    directions = rng.standard_normal((S, M))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    return scale * directions


def phase_durations(cfg: SynthConfig, frames: int, rng: np.random.Generator) -> np.ndarray:
    """Split ``frames`` into ``S`` positive durations with clipped log-normal shares."""
    S = cfg.num_phases
    factors = np.clip(
        rng.lognormal(mean=0.0, sigma=cfg.duration_sigma, size=S),
        cfg.duration_min_ratio,
        cfg.duration_max_ratio,
    )
    spare = frames - S
    raw = factors / factors.sum() * spare
    durations = np.floor(raw).astype(np.int64)
    remainder = spare - int(durations.sum())
    if remainder:
        # largest fractional parts first, stable on ties
        order = np.argsort(-(raw - durations), kind="stable")
        durations[order[:remainder]] += 1
    return durations + 1


def generate_video(cfg: SynthConfig, video_seed: int) -> tuple[FeatureSequence, LabelSequence]:
    if video_seed < 0:
        raise InvalidHyperparameters(f"video_seed must be non-negative, got {video_seed}")
    means = phase_means(cfg)
    rng = np.random.default_rng([cfg.seed, video_seed])
    frames = int(rng.integers(cfg.min_frames, cfg.max_frames + 1))
    durations = phase_durations(cfg, frames, rng)
    labels = np.repeat(np.arange(cfg.num_phases, dtype=np.int64), durations)
    noise = rng.standard_normal((frames, cfg.dim)) * (cfg.noise / np.sqrt(cfg.dim))
    data = means[labels] + noise
    return FeatureSequence(data), LabelSequence(labels, cfg.num_phases)


def video_id_for(video_seed: int) -> str:
    return f"video{video_seed:03d}"


def generate_dataset(
    cfg: SynthConfig,
    count: int | None = None,
    first_seed: int = 0,
) -> list[SyntheticVideo]:
    """``count`` videos (default ``cfg.num_videos``) with seeds ``first_seed, first_seed + 1, ...``."""
    count = cfg.num_videos if count is None else count
    if count < 1:
        raise InvalidHyperparameters(f"count must be at least 1, got {count}")
    videos = []
    for video_seed in range(first_seed, first_seed + count):
        features, labels = generate_video(cfg, video_seed)
        videos.append(SyntheticVideo(video_id_for(video_seed), features, labels))
    logger.info(
        f"[Synth] generated {count} video(s): S={cfg.num_phases}, M={cfg.dim}, "
        f"separation={cfg.separation:g}, noise={cfg.noise:g}, seed={cfg.seed}"
    )
    return videos


__all__ = [
    "SynthConfig",
    "SyntheticVideo",
    "phase_means",
    "phase_durations",
    "generate_video",
    "generate_dataset",
    "video_id_for",
]
