from __future__ import annotations

"""Binary feature files.

Layout (little-endian): magic ``b"PHFT"``, then ``u32`` version, ``u32`` frame
count ``T`` and ``u32`` dimension ``M``, then ``T * M`` ``f32`` values in
row-major order.
"""

from pathlib import Path

import numpy as np

from errors import BadMagic, FormatError, TruncatedFile, VersionUnsupported
from phase_types import FeatureSequence

FEATURE_MAGIC = b"PHFT"
FEATURE_VERSION = 1
HEADER_SIZE = 16
FEATURE_SUFFIX = ".features"

_HEADER_DTYPE = np.dtype("<u4")
_VALUE_DTYPE = np.dtype("<f4")


def encode_features(features: FeatureSequence) -> bytes:
    header = np.array([FEATURE_VERSION, features.frames, features.dim], dtype=_HEADER_DTYPE)
    return FEATURE_MAGIC + header.tobytes() + features.data.astype(_VALUE_DTYPE).tobytes(order="C")


def decode_features(payload: bytes, source: str = "<bytes>") -> FeatureSequence:
    if len(payload) < len(FEATURE_MAGIC):
        raise TruncatedFile(f"{source}: {len(payload)} byte(s), too short for a feature file")
    if payload[: len(FEATURE_MAGIC)] != FEATURE_MAGIC:
        raise BadMagic(f"{source}: expected magic {FEATURE_MAGIC!r}, got {payload[:4]!r}")
    if len(payload) < HEADER_SIZE:
        raise TruncatedFile(f"{source}: header is incomplete")
    version, frames, dim = (int(v) for v in np.frombuffer(payload, dtype=_HEADER_DTYPE, count=3, offset=4))
    if version != FEATURE_VERSION:
        raise VersionUnsupported(f"{source}: feature file version {version} is not supported")
    expected = HEADER_SIZE + _VALUE_DTYPE.itemsize * frames * dim
    if len(payload) < expected:
        raise TruncatedFile(
            f"{source}: header declares {frames}x{dim} values ({expected} bytes), file has {len(payload)}"
        )
    if len(payload) > expected:
        raise FormatError(f"{source}: {len(payload) - expected} trailing byte(s) after the feature data")
    values = np.frombuffer(payload, dtype=_VALUE_DTYPE, count=frames * dim, offset=HEADER_SIZE)
    return FeatureSequence(values.reshape(frames, dim).astype(np.float64))


def read_features(path: str | Path) -> FeatureSequence:
    path = Path(path)
    return decode_features(path.read_bytes(), source=str(path))


def write_features(seq: FeatureSequence, path: str | Path) -> Path:
    path = Path(path)
    path.write_bytes(encode_features(seq))
    return path


__all__ = [
    "FEATURE_MAGIC",
    "FEATURE_VERSION",
    "FEATURE_SUFFIX",
    "HEADER_SIZE",
    "encode_features",
    "decode_features",
    "read_features",
    "write_features",
]
