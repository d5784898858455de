from __future__ import annotations

"""Slow reference implementations used to cross-check the fast paths in tests."""

from typing import Sequence

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from errors import DimensionMismatch, PhaseWalkError

DENSE_ORACLE_MAX_FRAMES = 500
F1_ORACLE_MAX_FRAMES = 50


def dense_solve_oracle(laplacian: np.ndarray, gamma: float, z: np.ndarray) -> np.ndarray:
    """Solve ``(L + gamma I) x = gamma z`` by dense LU with partial pivoting."""
    laplacian = np.asarray(laplacian, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    size = laplacian.shape[0]
    if laplacian.shape != (size, size) or z.shape[0] != size:
        raise DimensionMismatch("dense oracle needs a square Laplacian matching z")
    if size > DENSE_ORACLE_MAX_FRAMES:
        raise PhaseWalkError(f"dense oracle is limited to {DENSE_ORACLE_MAX_FRAMES} frames")
    system = laplacian + gamma * np.eye(size)
    return lu_solve(lu_factor(system), gamma * z)


def _runs(labels: Sequence[int]) -> list[tuple[int, set[int]]]:
    runs: list[tuple[int, set[int]]] = []
    for frame, phase in enumerate(labels):
        if runs and runs[-1][0] == phase:
            runs[-1][1].add(frame)
        else:
            runs.append((phase, {frame}))
    return runs


def f1_bruteforce_oracle(pred: Sequence[int], gt: Sequence[int], overlap: float) -> float:
    """Segmental F1 on 0-100 from explicit frame sets.

    Every (predicted, ground-truth) pair is scored by counting shared frames;
    predicted segments are then matched in temporal order to the unmatched
    same-phase ground-truth segment of highest score.
    """
    pred = [int(value) for value in pred]
    gt = [int(value) for value in gt]
    if len(pred) != len(gt):
        raise DimensionMismatch("oracle inputs must have equal length")
    if len(pred) > F1_ORACLE_MAX_FRAMES:
        raise PhaseWalkError(f"F1 oracle is limited to {F1_ORACLE_MAX_FRAMES} frames")
    predicted = _runs(pred)
    truth = _runs(gt)

    scores = {}
    for i, (p_phase, p_frames) in enumerate(predicted):
        for j, (g_phase, g_frames) in enumerate(truth):
            if p_phase == g_phase:
                scores[i, j] = len(p_frames & g_frames) / len(p_frames | g_frames)

    matched: set[int] = set()
    tp = 0
    for i in range(len(predicted)):
        candidates = [(scores[i, j], -j) for j in range(len(truth)) if (i, j) in scores and j not in matched]
        if not candidates:
            continue
        score, neg_j = max(candidates)
        if score > 0 and score >= overlap:
            matched.add(-neg_j)
            tp += 1
    fp = len(predicted) - tp
    fn = len(truth) - tp
    if tp == 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 200.0 * precision * recall / (precision + recall)


__all__ = [
    "DENSE_ORACLE_MAX_FRAMES",
    "F1_ORACLE_MAX_FRAMES",
    "dense_solve_oracle",
    "f1_bruteforce_oracle",
]
