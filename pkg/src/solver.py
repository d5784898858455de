from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

from errors import AlreadyCorrected, DimensionMismatch, InvalidHyperparameters, PhaseWalkError
from graph import TridiagonalMatrix
from phase_types import LabelSequence, PriorMatrix, ProbabilityMatrix

logger = logging.getLogger(__name__)


class RandomWalkSystem:
    """Banded Cholesky factor of ``L + gamma * I`` for one chain graph.

    The matrix is strictly diagonally dominant with positive diagonal for
    ``gamma > 0``, so the factorization always succeeds. One factor serves every
    phase; each right-hand side column is solved independently.
    """

    def __init__(self, laplacian: TridiagonalMatrix, gamma: float) -> None:
        if not (np.isfinite(gamma) and gamma > 0):
            raise InvalidHyperparameters(f"gamma must be positive, got {gamma}")
        self._laplacian = laplacian
        self._gamma = float(gamma)
        size = laplacian.size
        self._factor: np.ndarray | None = None
        if size == 1:
            # 1x1 system: L = [0], so x = z
            return
        banded = np.zeros((2, size), dtype=np.float64)
        banded[0, 1:] = laplacian.off
        banded[1, :] = laplacian.diag + self._gamma
        self._factor = cholesky_banded(banded, lower=False, check_finite=False)

    @property
    def size(self) -> int:
        return self._laplacian.size

    @property
    def gamma(self) -> float:
        return self._gamma

    @property
    def laplacian(self) -> TridiagonalMatrix:
        return self._laplacian

    def solve(self, prior: np.ndarray) -> np.ndarray:
        """Solve ``(L + gamma I) x = gamma z`` for a vector or a ``(T, k)`` block."""
        prior = np.asarray(prior, dtype=np.float64)
        if prior.shape[0] != self.size:
            raise DimensionMismatch(
                f"prior has {prior.shape[0]} frames, graph has {self.size}"
            )
        if self._factor is None:
            return prior.copy()
        return cho_solve_banded(
            (self._factor, False), self._gamma * prior, check_finite=False
        )


def _check_prior_row(prior_row: np.ndarray) -> np.ndarray:
    row = np.asarray(prior_row, dtype=np.float64)
    if row.ndim != 1:
        raise DimensionMismatch("prior row must be a vector")
    if not np.isfinite(row).all() or (row < 0).any():
        raise PhaseWalkError("prior row entries must be finite and non-negative")
    return row


def solve_phase(
    laplacian: TridiagonalMatrix,
    gamma: float,
    prior_row: np.ndarray,
) -> np.ndarray:
    row = _check_prior_row(prior_row)
    return RandomWalkSystem(laplacian, gamma).solve(row)


def solve_all_phases(
    laplacian: TridiagonalMatrix,
    gamma: float,
    priors: PriorMatrix,
    max_workers: int | None = None,
) -> ProbabilityMatrix:
    """Per-phase solves sharing one factorization.

    With ``max_workers > 1`` the phases are solved on a thread pool; each column
    goes through the same factor, so the result equals the sequential one.
    """
    if priors.frames != laplacian.size:
        raise DimensionMismatch(
            f"prior has {priors.frames} frames, Laplacian has {laplacian.size}"
        )
    system = RandomWalkSystem(laplacian, gamma)
    if max_workers is not None and max_workers > 1 and priors.num_phases > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(system.solve, priors.values))
        solution = np.vstack(rows)
    else:
        solution = system.solve(priors.values.T).T

    if logger.isEnabledFor(logging.DEBUG):
        residuals = [
            residual_norm(laplacian, gamma, solution[s], priors.values[s])
            for s in range(priors.num_phases)
        ]
        logger.debug(
            f"[Solver] S={priors.num_phases}, T={priors.frames}, gamma={gamma:g}, "
            f"max residual={max(residuals):.3e}"
        )
    return ProbabilityMatrix(solution, corrected=False)


def apply_correction(probs: ProbabilityMatrix) -> ProbabilityMatrix:
    """Add ``mu_t = (1 - sum_s x_t^s) / S`` to every phase entry of frame ``t``.

    Entries may become negative; only the column sums are restored.
    """
    if probs.corrected:
        raise AlreadyCorrected()
    values = probs.values
    mu = (1.0 - values.sum(axis=0)) / probs.num_phases
    corrected = values + mu[None, :]
    return ProbabilityMatrix(corrected, corrected=True)


def decode(probs: ProbabilityMatrix) -> LabelSequence:
    # np.argmax returns the first maximum, i.e. ties go to the smallest phase id
    labels = np.argmax(probs.values, axis=0)
    return LabelSequence(labels, probs.num_phases)


def objective(
    laplacian: TridiagonalMatrix,
    gamma: float,
    x: np.ndarray,
    prior_row: np.ndarray,
) -> float:
    """``x^T L x + gamma * ||x - z||^2``."""
    x = np.asarray(x, dtype=np.float64)
    diff = x - np.asarray(prior_row, dtype=np.float64)
    return float(x @ laplacian.matvec(x) + gamma * (diff @ diff))


def gradient(
    laplacian: TridiagonalMatrix,
    gamma: float,
    x: np.ndarray,
    prior_row: np.ndarray,
) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return 2.0 * laplacian.matvec(x) + 2.0 * gamma * (x - np.asarray(prior_row, dtype=np.float64))


def residual_norm(
    laplacian: TridiagonalMatrix,
    gamma: float,
    x: np.ndarray,
    prior_row: np.ndarray,
) -> float:
    """Infinity norm of ``(L + gamma I) x - gamma z``."""
    x = np.asarray(x, dtype=np.float64)
    lhs = laplacian.matvec(x) + gamma * x
    return float(np.abs(lhs - gamma * np.asarray(prior_row, dtype=np.float64)).max())


__all__ = [
    "RandomWalkSystem",
    "solve_phase",
    "solve_all_phases",
    "apply_correction",
    "decode",
    "objective",
    "gradient",
    "residual_norm",
]
