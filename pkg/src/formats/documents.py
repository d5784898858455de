from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from errors import MalformedDocument, PhaseWalkError
from evaluation.metrics import EvalReport
from phase_types import TimestampSet
from priors.fewshot import FewShotModel


def dump_json(payload: Any, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def load_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{path}: invalid JSON ({exc})") from exc


def _require_object(payload: Any, path: Path, keys: tuple[str, ...]) -> dict[str, Any]:
    if not isinstance(payload, dict):
        raise MalformedDocument(f"{path}: top-level JSON value must be an object")
    missing = [key for key in keys if key not in payload]
    if missing:
        raise MalformedDocument(f"{path}: missing field(s) {missing}")
    return payload


def read_timestamps(path: str | Path) -> TimestampSet:
    """``{"num_phases": S, "entries": [[frame, phase], ...]}``.

    Frame ranges are checked later, against the video the timestamps are used with.
    """
    path = Path(path)
    payload = _require_object(load_json(path), path, ("num_phases", "entries"))
    entries = payload["entries"]
    if not isinstance(entries, list):
        raise MalformedDocument(f"{path}: 'entries' must be a list of [frame, phase] pairs")
    for entry in entries:
        if not isinstance(entry, list) or not all(isinstance(value, int) for value in entry):
            raise MalformedDocument(f"{path}: timestamp entry {entry!r} is not an integer pair")
    return TimestampSet.from_pairs(entries, int(payload["num_phases"]))


def write_timestamps(ts: TimestampSet, path: str | Path) -> Path:
    return dump_json(
        {"num_phases": ts.num_phases, "entries": [[frame, phase] for frame, phase in ts.entries]},
        path,
    )


def read_model(path: str | Path) -> FewShotModel:
    path = Path(path)
    payload = _require_object(
        load_json(path), path, ("num_phases", "dim", "alpha", "phases", "histogram")
    )
    try:
        return FewShotModel.from_dict(payload)
    except PhaseWalkError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDocument(f"{path}: invalid few-shot model ({exc})") from exc


def write_model(model: FewShotModel, path: str | Path) -> Path:
    return dump_json(model.to_dict(), path)


def read_report(path: str | Path) -> EvalReport:
    path = Path(path)
    payload = _require_object(load_json(path), path, ("accuracy", "f1"))
    try:
        return EvalReport.from_dict(payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDocument(f"{path}: invalid evaluation report ({exc})") from exc


def write_report(report: EvalReport, path: str | Path) -> Path:
    return dump_json(report.to_dict(), path)


__all__ = [
    "dump_json",
    "load_json",
    "read_timestamps",
    "write_timestamps",
    "read_model",
    "write_model",
    "read_report",
    "write_report",
]
