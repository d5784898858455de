from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from errors import FormatError, MalformedRow, MissingHeader
from phase_types import LabelSequence, ProbabilityMatrix

LABEL_HEADER = ("frame", "phase")
LABEL_SUFFIX = ".labels.csv"
PREDICTION_SUFFIX = ".pred.csv"


def _format_float(value: float) -> str:
    # repr gives the shortest string that parses back to the same double
    return repr(float(value))


def _probability_header(num_phases: int) -> list[str]:
    return [f"p{s}" for s in range(num_phases)]


def _read_rows(path: Path) -> tuple[list[str], list[tuple[int, list[str]]]]:
    text = path.read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    rows = [(reader.line_num, row) for row in reader if row]
    if not rows:
        raise MissingHeader(f"{path}: file is empty")
    _, header = rows[0]
    return [cell.strip() for cell in header], rows[1:]


def _parse_int(cell: str, line: int, column: str, path: Path) -> int:
    try:
        return int(cell.strip())
    except ValueError:
        raise MalformedRow(line, f"{path}: {column} {cell!r} is not an integer") from None


def _parse_frame_phase(
    rows: list[tuple[int, list[str]]], width: int, path: Path
) -> tuple[np.ndarray, list[list[str]]]:
    phases: list[int] = []
    rest: list[list[str]] = []
    for expected_frame, (line, row) in enumerate(rows):
        if len(row) != width:
            raise MalformedRow(line, f"{path}: expected {width} column(s), got {len(row)}")
        frame = _parse_int(row[0], line, "frame", path)
        if frame != expected_frame:
            raise MalformedRow(line, f"{path}: expected frame {expected_frame}, got {frame}")
        phase = _parse_int(row[1], line, "phase", path)
        if phase < 0:
            raise MalformedRow(line, f"{path}: phase {phase} is negative")
        phases.append(phase)
        rest.append(row[2:])
    if not phases:
        raise FormatError(f"{path}: no frame rows")
    return np.asarray(phases, dtype=np.int64), rest


def read_labels(path: str | Path, num_phases: int | None = None) -> LabelSequence:
    """Read a ``frame,phase`` CSV whose frame column is exactly ``0..T-1``."""
    path = Path(path)
    header, rows = _read_rows(path)
    if tuple(header) != LABEL_HEADER:
        raise MissingHeader(f"{path}: expected header 'frame,phase', got {','.join(header)!r}")
    labels, _ = _parse_frame_phase(rows, len(LABEL_HEADER), path)
    if num_phases is None:
        num_phases = int(labels.max()) + 1
    return LabelSequence(labels, num_phases)


def write_labels(labels: LabelSequence, path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(LABEL_HEADER)
        writer.writerows((frame, phase) for frame, phase in enumerate(labels.to_list()))
    return path


def write_predictions(
    labels: LabelSequence,
    path: str | Path,
    probabilities: ProbabilityMatrix | None = None,
) -> Path:
    """``frame,phase`` rows, optionally followed by one ``p<s>`` column per phase."""
    path = Path(path)
    header = list(LABEL_HEADER)
    if probabilities is not None:
        if probabilities.frames != labels.frames:
            raise FormatError("probabilities and labels cover a different number of frames")
        header.extend(_probability_header(probabilities.num_phases))
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for frame, phase in enumerate(labels.to_list()):
            row = [str(frame), str(phase)]
            if probabilities is not None:
                row.extend(_format_float(value) for value in probabilities.values[:, frame])
            writer.writerow(row)
    return path


def read_predictions(
    path: str | Path,
    num_phases: int | None = None,
) -> tuple[LabelSequence, np.ndarray | None]:
    """Inverse of ``write_predictions``; probabilities come back as ``S x T`` or ``None``."""
    path = Path(path)
    header, rows = _read_rows(path)
    if tuple(header[:2]) != LABEL_HEADER:
        raise MissingHeader(f"{path}: expected header starting with 'frame,phase'")
    extra = header[2:]
    if extra and extra != _probability_header(len(extra)):
        raise MissingHeader(f"{path}: probability columns must be named p0..p{len(extra) - 1}")
    labels, rest = _parse_frame_phase(rows, len(header), path)
    probabilities = None
    if extra:
        try:
            probabilities = np.array(rest, dtype=np.float64).T
        except ValueError as exc:
            raise FormatError(f"{path}: probability column is not numeric ({exc})") from exc
    if num_phases is None:
        num_phases = max(int(labels.max()) + 1, len(extra))
    return LabelSequence(labels, num_phases), probabilities


def write_frame_matrix(values: np.ndarray, path: str | Path, prefix: str = "p") -> Path:
    """Write an ``S x T`` matrix as one ``frame,<prefix>0..`` row per frame."""
    values = np.asarray(values, dtype=np.float64)
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["frame", *[f"{prefix}{s}" for s in range(values.shape[0])]])
        for frame in range(values.shape[1]):
            writer.writerow([str(frame), *(_format_float(value) for value in values[:, frame])])
    return path


def read_frame_matrix(path: str | Path) -> np.ndarray:
    path = Path(path)
    header, rows = _read_rows(path)
    if not header or header[0] != "frame" or len(header) < 2:
        raise MissingHeader(f"{path}: expected header 'frame,p0,...'")
    columns: list[list[float]] = []
    for expected_frame, (line, row) in enumerate(rows):
        if len(row) != len(header):
            raise MalformedRow(line, f"{path}: expected {len(header)} column(s), got {len(row)}")
        frame = _parse_int(row[0], line, "frame", path)
        if frame != expected_frame:
            raise MalformedRow(line, f"{path}: expected frame {expected_frame}, got {frame}")
        try:
            columns.append([float(cell) for cell in row[1:]])
        except ValueError:
            raise MalformedRow(line, f"{path}: non-numeric value") from None
    if not columns:
        raise FormatError(f"{path}: no frame rows")
    return np.asarray(columns, dtype=np.float64).T


__all__ = [
    "LABEL_HEADER",
    "LABEL_SUFFIX",
    "PREDICTION_SUFFIX",
    "read_labels",
    "write_labels",
    "read_predictions",
    "write_predictions",
    "read_frame_matrix",
    "write_frame_matrix",
]
