from __future__ import annotations

from . import dataset, documents, features, tables
from .dataset import (
    DEFAULT_SPLIT_FRACTIONS,
    VideoRecord,
    list_video_ids,
    load_dataset,
    load_video,
    read_with_context,
    save_video,
    split_ids,
)
from .documents import (
    dump_json,
    load_json,
    read_model,
    read_report,
    read_timestamps,
    write_model,
    write_report,
    write_timestamps,
)
from .features import (
    FEATURE_MAGIC,
    FEATURE_SUFFIX,
    FEATURE_VERSION,
    decode_features,
    encode_features,
    read_features,
    write_features,
)
from .tables import (
    LABEL_SUFFIX,
    PREDICTION_SUFFIX,
    read_frame_matrix,
    read_labels,
    read_predictions,
    write_frame_matrix,
    write_labels,
    write_predictions,
)

__all__ = [
    "dataset",
    "documents",
    "features",
    "tables",
    "FEATURE_MAGIC",
    "FEATURE_VERSION",
    "FEATURE_SUFFIX",
    "LABEL_SUFFIX",
    "PREDICTION_SUFFIX",
    "DEFAULT_SPLIT_FRACTIONS",
    "encode_features",
    "decode_features",
    "read_features",
    "write_features",
    "read_labels",
    "write_labels",
    "read_predictions",
    "write_predictions",
    "read_frame_matrix",
    "write_frame_matrix",
    "dump_json",
    "load_json",
    "read_timestamps",
    "write_timestamps",
    "read_model",
    "write_model",
    "read_report",
    "write_report",
    "VideoRecord",
    "list_video_ids",
    "load_video",
    "read_with_context",
    "load_dataset",
    "save_video",
    "split_ids",
]
