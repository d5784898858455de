from __future__ import annotations

"""Few-shot spatial-temporal prior.

A handful of fully labelled training videos give two pieces of evidence for a
test frame: how likely its feature vector is under each phase's Gaussian
(spatial prior ``u``) and whether the phase is common at that relative time in
the training videos (binary temporal prior ``v``). The prior is ``z = u * v``.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy import linalg
from scipy.special import logsumexp

from errors import (
    DimensionMismatch,
    EmptyDataset,
    InsufficientSamples,
    InvalidHyperparameters,
    InvalidLabel,
    LengthMismatch,
    NonPSDAfterShrinkage,
)
from phase_types import FeatureSequence, LabelSequence, PriorMatrix
from priors.base import time_bins

logger = logging.getLogger(__name__)

# Default shrinkage is this fraction of the mean per-dimension variance.
DEFAULT_SHRINKAGE_SCALE = 1e-3
# Used instead when a cluster has zero variance (constant features).
MIN_EPSILON = 1e-6

LabeledVideo = tuple[FeatureSequence, LabelSequence]


def default_epsilon(covariance: np.ndarray) -> float:
    dim = covariance.shape[0]
    epsilon = DEFAULT_SHRINKAGE_SCALE * float(np.trace(covariance)) / dim
    return epsilon if epsilon > 0 else MIN_EPSILON


@dataclass(frozen=True)
class FewShotConfig:
    alpha: float = 0.5
    epsilon: float | None = None
    normalize_spatial: bool = True

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise InvalidHyperparameters(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.epsilon is not None and not (np.isfinite(self.epsilon) and self.epsilon > 0):
            raise InvalidHyperparameters(f"epsilon must be positive, got {self.epsilon}")


@dataclass(frozen=True)
class GaussianPhaseModel:
    """One full-covariance Gaussian per phase.

    ``covariances`` hold the unbiased sample covariances; the shrinkage
    ``epsilons[s] * I`` is added only when factorizing.
    """

    means: np.ndarray
    covariances: np.ndarray
    epsilons: np.ndarray
    counts: np.ndarray
    _cholesky: tuple[np.ndarray, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        means = np.array(self.means, dtype=np.float64)
        covariances = np.array(self.covariances, dtype=np.float64)
        epsilons = np.array(self.epsilons, dtype=np.float64)
        counts = np.array(self.counts, dtype=np.int64)
        if means.ndim != 2 or covariances.shape != (means.shape[0], means.shape[1], means.shape[1]):
            raise DimensionMismatch("means must be S x M and covariances S x M x M")
        if epsilons.shape != (means.shape[0],) or counts.shape != (means.shape[0],):
            raise DimensionMismatch("one epsilon and one count per phase are required")
        for phase, count in enumerate(counts):
            if count < 2:
                raise InsufficientSamples(phase, int(count))

        factors = []
        eye = np.eye(means.shape[1])
        for phase in range(means.shape[0]):
            shrunk = covariances[phase] + epsilons[phase] * eye
            try:
                factors.append(linalg.cholesky(shrunk, lower=True))
            except linalg.LinAlgError as exc:
                raise NonPSDAfterShrinkage(phase, float(epsilons[phase])) from exc

        for name, value in (
            ("means", means),
            ("covariances", covariances),
            ("epsilons", epsilons),
            ("counts", counts),
        ):
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        object.__setattr__(self, "_cholesky", tuple(factors))

    @property
    def num_phases(self) -> int:
        return int(self.means.shape[0])

    @property
    def dim(self) -> int:
        return int(self.means.shape[1])

    def log_density(self, data: np.ndarray) -> np.ndarray:
        """``S x T`` log-densities of the rows of ``data``."""
        data = np.asarray(data, dtype=np.float64)
        if data.ndim != 2 or data.shape[1] != self.dim:
            raise DimensionMismatch(
                f"features have dimension {data.shape[-1]}, model expects {self.dim}"
            )
        log_prob = np.empty((self.num_phases, data.shape[0]), dtype=np.float64)
        constant = self.dim * np.log(2.0 * np.pi)
        for phase in range(self.num_phases):
            chol = self._cholesky[phase]
            log_det = 2.0 * np.sum(np.log(np.diagonal(chol)))
            whitened = linalg.solve_triangular(chol, (data - self.means[phase]).T, lower=True)
            log_prob[phase] = -0.5 * (constant + log_det + np.einsum("ij,ij->j", whitened, whitened))
        return log_prob


def _check_dataset(dataset: Sequence[LabeledVideo], num_phases: int) -> int:
    if not dataset:
        raise EmptyDataset("few-shot fitting needs at least one labelled video")
    dims = {features.dim for features, _ in dataset}
    if len(dims) != 1:
        raise DimensionMismatch(f"training videos disagree on feature dimension: {sorted(dims)}")
    for features, labels in dataset:
        if features.frames != labels.frames:
            raise LengthMismatch(features.frames, labels.frames, what="features and labels")
        if labels.labels.max() >= num_phases:
            raise InvalidLabel(
                f"label {int(labels.labels.max())} is not below num_phases={num_phases}"
            )
    return dims.pop()


def fit_gaussians(
    dataset: Sequence[LabeledVideo],
    num_phases: int,
    epsilon: float | None = None,
) -> GaussianPhaseModel:
    """Group frames by phase and fit a mean and unbiased covariance per phase.

    ``epsilon=None`` picks ``1e-3 * trace(cov) / M`` for every phase separately.
    """
    if epsilon is not None and not (np.isfinite(epsilon) and epsilon > 0):
        raise InvalidHyperparameters(f"epsilon must be positive, got {epsilon}")
    dim = _check_dataset(dataset, num_phases)
    data = np.concatenate([features.data for features, _ in dataset], axis=0)
    labels = np.concatenate([sequence.labels for _, sequence in dataset])

    means = np.zeros((num_phases, dim))
    covariances = np.zeros((num_phases, dim, dim))
    epsilons = np.zeros(num_phases)
    counts = np.bincount(labels, minlength=num_phases)
    for phase in range(num_phases):
        if counts[phase] < 2:
            raise InsufficientSamples(phase, int(counts[phase]))
        cluster = data[labels == phase]
        means[phase] = cluster.mean(axis=0)
        covariances[phase] = np.atleast_2d(np.cov(cluster, rowvar=False, ddof=1))
        epsilons[phase] = default_epsilon(covariances[phase]) if epsilon is None else epsilon

    logger.info(
        f"[FewShot] fitted {num_phases} Gaussians (M={dim}) from {len(dataset)} video(s); "
        f"samples per phase: {counts.tolist()}"
    )
    return GaussianPhaseModel(means, covariances, epsilons, counts)


def log_spatial_prior(
    model: GaussianPhaseModel,
    features: FeatureSequence,
    normalize_per_frame: bool = True,
) -> np.ndarray:
    log_prob = model.log_density(features.data)
    if normalize_per_frame:
        log_prob = log_prob - logsumexp(log_prob, axis=0, keepdims=True)
    return log_prob


def spatial_prior(
    model: GaussianPhaseModel,
    features: FeatureSequence,
    normalize_per_frame: bool = True,
) -> np.ndarray:
    """``u[s, t]``: density of frame ``t`` under phase ``s``.

    With ``normalize_per_frame`` each column is divided by its sum (done in log
    space, so columns never collapse to zero).
    """
    return np.exp(log_spatial_prior(model, features, normalize_per_frame))


@dataclass(frozen=True)
class TemporalHistogram:
    """``bins[i, s]``: share of phase ``s`` in time-bin ``i``; rows sum to 1."""

    bins: np.ndarray

    def __post_init__(self) -> None:
        bins = np.array(self.bins, dtype=np.float64)
        if bins.ndim != 2 or bins.shape[0] < 1 or bins.shape[1] < 1:
            raise DimensionMismatch("histogram must be an N_x x S matrix")
        if not np.isfinite(bins).all() or (bins < 0).any():
            raise DimensionMismatch("histogram entries must be finite and non-negative")
        bins.setflags(write=False)
        object.__setattr__(self, "bins", bins)

    @property
    def n_x(self) -> int:
        return int(self.bins.shape[0])

    @property
    def num_phases(self) -> int:
        return int(self.bins.shape[1])

    def thresholds(self, alpha: float) -> np.ndarray:
        """Per-phase cut ``alpha * max_i H[i, s]``."""
        return alpha * self.bins.max(axis=0)


def fit_histogram(label_sequences: Sequence[LabelSequence], num_phases: int) -> TemporalHistogram:
    """Average per-video phase/time histograms, then normalize each time-bin.

    Counts are accumulated as integers, so the result does not depend on the
    order of the videos.
    """
    if not label_sequences:
        raise EmptyDataset("temporal histogram needs at least one labelled video")
    n_x = min(sequence.frames for sequence in label_sequences)
    counts = np.zeros(n_x * num_phases, dtype=np.int64)
    for sequence in label_sequences:
        if sequence.labels.max() >= num_phases:
            raise InvalidLabel(
                f"label {int(sequence.labels.max())} is not below num_phases={num_phases}"
            )
        cells = time_bins(sequence.frames, n_x) * num_phases + sequence.labels
        counts += np.bincount(cells, minlength=n_x * num_phases)
    counts = counts.reshape(n_x, num_phases).astype(np.float64)
    # every bin receives at least one frame of every video since T_n >= n_x
    histogram = counts / counts.sum(axis=1, keepdims=True)
    logger.debug(f"[FewShot] temporal histogram with N_x={n_x} bins over {len(label_sequences)} video(s)")
    return TemporalHistogram(histogram)


def temporal_prior(hist: TemporalHistogram, frames: int, alpha: float) -> np.ndarray:
    """Binary ``S x T`` mask: ``v[s, t] = 1`` iff ``H[bin(t), s] >= alpha * max_i H[i, s]``."""
    if not 0.0 < alpha < 1.0:
        raise InvalidHyperparameters(f"alpha must lie in (0, 1), got {alpha}")
    if frames < hist.n_x:
        logger.warning(
            f"[FewShot] test video has {frames} frames, fewer than the {hist.n_x} histogram bins; "
            "some bins are never visited"
        )
    passes = hist.bins >= hist.thresholds(alpha)[None, :]
    return passes[time_bins(frames, hist.n_x)].T.astype(np.float64)


@dataclass(frozen=True)
class FewShotModel:
    gaussians: GaussianPhaseModel
    histogram: TemporalHistogram
    alpha: float = 0.5
    epsilon: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise InvalidHyperparameters(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.gaussians.num_phases != self.histogram.num_phases:
            raise DimensionMismatch(
                f"{self.gaussians.num_phases} Gaussians but {self.histogram.num_phases} histogram phases"
            )

    @property
    def num_phases(self) -> int:
        return self.gaussians.num_phases

    @property
    def dim(self) -> int:
        return self.gaussians.dim

    def with_alpha(self, alpha: float) -> "FewShotModel":
        return FewShotModel(self.gaussians, self.histogram, alpha=alpha, epsilon=self.epsilon)

    def to_dict(self) -> dict[str, Any]:
        g = self.gaussians
        return {
            "num_phases": self.num_phases,
            "dim": self.dim,
            "alpha": self.alpha,
            "epsilon": self.epsilon,
            "phases": [
                {
                    "mean": g.means[s].tolist(),
                    "cov": g.covariances[s].tolist(),
                    "epsilon": float(g.epsilons[s]),
                    "count": int(g.counts[s]),
                }
                for s in range(self.num_phases)
            ],
            "histogram": {"n_x": self.histogram.n_x, "bins": self.histogram.bins.tolist()},
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "FewShotModel":
        phases = payload["phases"]
        num_phases = int(payload["num_phases"])
        dim = int(payload["dim"])
        if len(phases) != num_phases:
            raise DimensionMismatch(f"model declares {num_phases} phases but lists {len(phases)}")
        means = np.array([phase["mean"] for phase in phases], dtype=np.float64).reshape(num_phases, dim)
        covariances = np.array([phase["cov"] for phase in phases], dtype=np.float64).reshape(
            num_phases, dim, dim
        )
        gaussians = GaussianPhaseModel(
            means=means,
            covariances=covariances,
            epsilons=[float(phase["epsilon"]) for phase in phases],
            counts=[int(phase["count"]) for phase in phases],
        )
        histogram = payload["histogram"]
        bins = np.array(histogram["bins"], dtype=np.float64)
        if bins.ndim != 2 or bins.shape[0] != int(histogram["n_x"]):
            raise DimensionMismatch("histogram n_x does not match its bins")
        epsilon = payload.get("epsilon")
        return cls(
            gaussians=gaussians,
            histogram=TemporalHistogram(bins),
            alpha=float(payload["alpha"]),
            epsilon=None if epsilon is None else float(epsilon),
        )


def fit_fewshot_model(
    dataset: Sequence[LabeledVideo],
    num_phases: int,
    config: FewShotConfig | None = None,
) -> FewShotModel:
    config = config or FewShotConfig()
    gaussians = fit_gaussians(dataset, num_phases, epsilon=config.epsilon)
    histogram = fit_histogram([labels for _, labels in dataset], num_phases)
    return FewShotModel(gaussians, histogram, alpha=config.alpha, epsilon=config.epsilon)


def fewshot_prior(
    model: FewShotModel,
    features: FeatureSequence,
    normalize_spatial: bool = True,
) -> PriorMatrix:
    """``z = u * v`` for one test video."""
    u = spatial_prior(model.gaussians, features, normalize_per_frame=normalize_spatial)
    v = temporal_prior(model.histogram, features.frames, model.alpha)
    return PriorMatrix(u * v)


class FewShotPriorBuilder:
    def __init__(self, model: FewShotModel, normalize_spatial: bool = True) -> None:
        self._model = model
        self._normalize_spatial = normalize_spatial

    @property
    def num_phases(self) -> int:
        return self._model.num_phases

    @property
    def model(self) -> FewShotModel:
        return self._model

    def build(self, features: FeatureSequence) -> PriorMatrix:
        return fewshot_prior(self._model, features, normalize_spatial=self._normalize_spatial)


__all__ = [
    "DEFAULT_SHRINKAGE_SCALE",
    "MIN_EPSILON",
    "LabeledVideo",
    "FewShotConfig",
    "GaussianPhaseModel",
    "TemporalHistogram",
    "FewShotModel",
    "FewShotPriorBuilder",
    "default_epsilon",
    "fit_gaussians",
    "fit_histogram",
    "fit_fewshot_model",
    "spatial_prior",
    "log_spatial_prior",
    "temporal_prior",
    "fewshot_prior",
]
