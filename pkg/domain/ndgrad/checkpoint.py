"""
Checkpoint files: an 8-byte little-endian header length, a UTF-8 JSON header
(names, shapes, step, metadata), then one raw float64 LE blob per tensor in
header order.
"""

from __future__ import annotations

import json
import logging
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .errors import CheckpointFormatError

logger = logging.getLogger(__name__)

_LENGTH = struct.Struct("<Q")


@dataclass
class Checkpoint:
    tensors: dict[str, np.ndarray]
    step: int = 0
    metadata: dict[str, Any] = field(default_factory=dict)


def save_checkpoint(
    path: str | Path,
    tensors: Mapping[str, np.ndarray],
    step: int = 0,
    metadata: Mapping[str, Any] | None = None,
) -> Path:
    path = Path(path)
    header = {
        "format": "ndgrad-checkpoint",
        "version": 1,
        "step": int(step),
        "metadata": dict(metadata or {}),
        "tensors": [{"name": name, "shape": list(arr.shape)} for name, arr in tensors.items()],
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    with path.open("wb") as fh:
        fh.write(_LENGTH.pack(len(header_bytes)))
        fh.write(header_bytes)
        for arr in tensors.values():
            fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())
    logger.info("wrote checkpoint %s (%d tensors, step %d)", path, len(tensors), step)
    return path


def load_checkpoint(path: str | Path) -> Checkpoint:
    raw = Path(path).read_bytes()
    if len(raw) < _LENGTH.size:
        raise CheckpointFormatError(f"{path}: truncated header")
    (header_len,) = _LENGTH.unpack_from(raw, 0)
    start = _LENGTH.size
    try:
        header = json.loads(raw[start : start + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointFormatError(f"{path}: unreadable header") from exc
    if header.get("format") != "ndgrad-checkpoint":
        raise CheckpointFormatError(f"{path}: not an ndgrad checkpoint")
    offset = start + header_len
    tensors: dict[str, np.ndarray] = {}
    for entry in header["tensors"]:
        shape = tuple(entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        end = offset + 8 * count
        if end > len(raw):
            raise CheckpointFormatError(f"{path}: blob for {entry['name']} is truncated")
        tensors[entry["name"]] = np.frombuffer(raw[offset:end], dtype="<f8").reshape(shape).astype(np.float64)
        offset = end
    return Checkpoint(tensors=tensors, step=header["step"], metadata=header["metadata"])
