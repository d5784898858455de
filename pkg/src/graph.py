from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np

from errors import DimensionMismatch, InvalidHyperparameters, NonPositiveWeight
from phase_types import FeatureSequence

logger = logging.getLogger(__name__)

WeightConvention = Literal["paper-literal", "distance"]
WEIGHT_CONVENTIONS: tuple[str, ...] = ("paper-literal", "distance")
DEFAULT_WEIGHT_CONVENTION: WeightConvention = "paper-literal"


def _frozen(values: np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Symmetric tridiagonal matrix stored as its diagonal and off-diagonal."""

    diag: np.ndarray
    off: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "diag", _frozen(self.diag))
        object.__setattr__(self, "off", _frozen(self.off))
        if self.diag.ndim != 1 or self.off.ndim != 1:
            raise DimensionMismatch("diag and off must be vectors")
        if self.diag.shape[0] < 1 or self.off.shape[0] != self.diag.shape[0] - 1:
            raise DimensionMismatch(
                f"off-diagonal length must be {self.diag.shape[0] - 1}, got {self.off.shape[0]}"
            )

    @property
    def size(self) -> int:
        return int(self.diag.shape[0])

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """Multiply by a vector or by the columns of a ``(size, k)`` matrix."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape[0] != self.size:
            raise DimensionMismatch(f"expected {self.size} rows, got {x.shape[0]}")
        diag = self.diag if x.ndim == 1 else self.diag[:, None]
        off = self.off if x.ndim == 1 else self.off[:, None]
        result = diag * x
        result[:-1] += off * x[1:]
        result[1:] += off * x[:-1]
        return result

    def row_sums(self) -> np.ndarray:
        sums = self.diag.copy()
        sums[:-1] += self.off
        sums[1:] += self.off
        return sums

    def to_dense(self) -> np.ndarray:
        dense = np.diag(self.diag)
        if self.size > 1:
            idx = np.arange(self.size - 1)
            dense[idx, idx + 1] = self.off
            dense[idx + 1, idx] = self.off
        return dense


@dataclass(frozen=True)
class ChainGraph:
    """Path graph over frames; ``edge_weights[i]`` joins frame ``i`` and ``i + 1``."""

    frames: int
    edge_weights: np.ndarray
    degrees: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "edge_weights", _frozen(self.edge_weights))
        object.__setattr__(self, "degrees", _frozen(self.degrees))
        if self.edge_weights.shape[0] != self.frames - 1:
            raise DimensionMismatch("a chain over T frames has T - 1 edges")
        if self.degrees.shape[0] != self.frames:
            raise DimensionMismatch("a chain over T frames has T degrees")

    @classmethod
    def from_weights(cls, weights: np.ndarray) -> "ChainGraph":
        weights = _check_weights(weights)
        return cls(frames=weights.shape[0] + 1, edge_weights=weights, degrees=_degrees(weights))

    def laplacian(self) -> TridiagonalMatrix:
        return TridiagonalMatrix(diag=self.degrees, off=-self.edge_weights)


def cosine_similarities(features: FeatureSequence) -> np.ndarray:
    data = features.data
    norms = np.linalg.norm(data, axis=1)
    dots = np.einsum("ij,ij->i", data[:-1], data[1:])
    # norms are non-zero: FeatureSequence rejects all-zero rows
    cosines = dots / (norms[:-1] * norms[1:])
    return np.clip(cosines, -1.0, 1.0)


def edge_weights(
    features: FeatureSequence,
    beta: float,
    convention: WeightConvention = DEFAULT_WEIGHT_CONVENTION,
) -> np.ndarray:
    """Weights of the T - 1 temporal edges.

    ``paper-literal``: ``exp(-beta * cos(f_i, f_j))``.
    ``distance``: ``exp(-beta * (1 - cos(f_i, f_j)))``; similar neighbours get weight
    close to 1.
    """
    if not (np.isfinite(beta) and beta > 0):
        raise InvalidHyperparameters(f"beta must be positive, got {beta}")
    cosines = cosine_similarities(features)
    if convention == "paper-literal":
        return np.exp(-beta * cosines)
    if convention == "distance":
        return np.exp(-beta * (1.0 - cosines))
    raise InvalidHyperparameters(
        f"unknown weight convention {convention!r}; expected one of {WEIGHT_CONVENTIONS}"
    )


def _check_weights(weights: np.ndarray) -> np.ndarray:
    weights = np.asarray(weights, dtype=np.float64)
    if weights.ndim != 1:
        raise DimensionMismatch("edge weights must be a vector")
    bad = np.flatnonzero(~(np.isfinite(weights) & (weights > 0)))
    if bad.size:
        index = int(bad[0])
        raise NonPositiveWeight(index, float(weights[index]))
    return weights


def _degrees(weights: np.ndarray) -> np.ndarray:
    degrees = np.zeros(weights.shape[0] + 1, dtype=np.float64)
    degrees[:-1] += weights
    degrees[1:] += weights
    return degrees


def build_laplacian(weights: np.ndarray) -> TridiagonalMatrix:
    weights = _check_weights(weights)
    return TridiagonalMatrix(diag=_degrees(weights), off=-weights)


def build_chain_graph(
    features: FeatureSequence,
    beta: float,
    convention: WeightConvention = DEFAULT_WEIGHT_CONVENTION,
) -> ChainGraph:
    weights = edge_weights(features, beta=beta, convention=convention)
    graph = ChainGraph.from_weights(weights)
    logger.debug(
        f"[Graph] T={graph.frames}, convention={convention}, beta={beta:g}, "
        f"weights in [{weights.min():.3e}, {weights.max():.3e}]"
    )
    return graph


__all__ = [
    "WeightConvention",
    "WEIGHT_CONVENTIONS",
    "DEFAULT_WEIGHT_CONVENTION",
    "TridiagonalMatrix",
    "ChainGraph",
    "cosine_similarities",
    "edge_weights",
    "build_laplacian",
    "build_chain_graph",
]
