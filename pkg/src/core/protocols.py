from __future__ import annotations

"""Unified protocol exports for public consumption."""

from pipelines.tuning import AnnotatedVideo, BuilderFactory
from priors.base import PriorBuilder

__all__ = [
    "PriorBuilder",
    "AnnotatedVideo",
    "BuilderFactory",
]
