from __future__ import annotations

"""Phase ribbons: ground truth on top, prediction below, one cell per frame."""

import csv
from pathlib import Path

import numpy as np

from errors import LengthMismatch, PhaseWalkError
from phase_types import LabelSequence

RIBBON_ROWS = ("gt", "pred")
# Fixed salt and no date keep the SVG bytes identical across runs.
_SVG_RC = {"svg.hashsalt": "phase-walk", "svg.fonttype": "none"}
_SVG_METADATA = {"Date": None, "Creator": None}


def ribbon_matrix(gt: LabelSequence, pred: LabelSequence) -> np.ndarray:
    if gt.frames != pred.frames:
        raise LengthMismatch(gt.frames, pred.frames, what="ground truth and prediction")
    return np.vstack([gt.labels, pred.labels])


def ribbon_cells(gt: LabelSequence, pred: LabelSequence) -> list[tuple[str, int, int]]:
    """``(row, frame, phase)`` for all ``2 * T`` cells."""
    matrix = ribbon_matrix(gt, pred)
    return [
        (row, frame, int(matrix[r, frame]))
        for r, row in enumerate(RIBBON_ROWS)
        for frame in range(matrix.shape[1])
    ]


def write_ribbon_csv(gt: LabelSequence, pred: LabelSequence, path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["row", "frame", "phase"])
        writer.writerows(ribbon_cells(gt, pred))
    return path


def _phase_colormap(num_phases: int):
    from matplotlib import colormaps
    from matplotlib.colors import ListedColormap

    base = colormaps["tab20" if num_phases > 10 else "tab10"]
    return ListedColormap([base(s % base.N) for s in range(num_phases)])


def _save_svg(figure, path: Path) -> Path:
    import matplotlib

    with matplotlib.rc_context(_SVG_RC):
        figure.savefig(path, format="svg", metadata=_SVG_METADATA)
    return path


def write_ribbon_svg(
    gt: LabelSequence,
    pred: LabelSequence,
    path: str | Path,
    num_phases: int | None = None,
    title: str | None = None,
) -> Path:
    from matplotlib.figure import Figure

    matrix = ribbon_matrix(gt, pred)
    num_phases = num_phases or max(gt.num_phases, pred.num_phases)
    figure = Figure(figsize=(10, 1.6))
    axes = figure.add_subplot(1, 1, 1)
    axes.imshow(
        matrix,
        aspect="auto",
        # embedded unsampled: one pixel per frame and row, whatever the figure width
        interpolation="none",
        cmap=_phase_colormap(num_phases),
        vmin=-0.5,
        vmax=num_phases - 0.5,
    )
    axes.set_yticks([0, 1], labels=["GT", "Pred"])
    axes.set_xlabel("frame")
    if title:
        axes.set_title(title)
    figure.tight_layout()
    return _save_svg(figure, Path(path))


def write_prior_svg(values: np.ndarray, path: str | Path, title: str | None = None) -> Path:
    """Heatmap of an ``S x T`` prior, one row per phase."""
    from matplotlib.figure import Figure

    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2 or values.size == 0:
        raise PhaseWalkError("prior heatmap needs a non-empty S x T matrix")
    figure = Figure(figsize=(10, 0.4 * values.shape[0] + 1.2))
    axes = figure.add_subplot(1, 1, 1)
    image = axes.imshow(values, aspect="auto", interpolation="none", cmap="viridis")
    axes.set_yticks(range(values.shape[0]), labels=[f"P{s}" for s in range(values.shape[0])])
    axes.set_xlabel("frame")
    figure.colorbar(image, ax=axes)
    if title:
        axes.set_title(title)
    figure.tight_layout()
    return _save_svg(figure, Path(path))


__all__ = [
    "RIBBON_ROWS",
    "ribbon_matrix",
    "ribbon_cells",
    "write_ribbon_csv",
    "write_ribbon_svg",
    "write_prior_svg",
]
