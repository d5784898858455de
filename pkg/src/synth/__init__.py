from __future__ import annotations

from . import generator, oracles
from .generator import (
    SynthConfig,
    SyntheticVideo,
    generate_dataset,
    generate_video,
    phase_durations,
    phase_means,
    video_id_for,
)
from .oracles import dense_solve_oracle, f1_bruteforce_oracle

__all__ = [
    "generator",
    "oracles",
    "SynthConfig",
    "SyntheticVideo",
    "phase_means",
    "phase_durations",
    "generate_video",
    "generate_dataset",
    "video_id_for",
    "dense_solve_oracle",
    "f1_bruteforce_oracle",
]
