"""
PPGB signal container.

Layout, all little-endian: magic b"PPGB", version (u32), sample rate (f32),
sample count (u64), then float32 samples with quiet NaN marking missing.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .definitions import RawRecord
from .errors import ContainerFormatError

MAGIC = b"PPGB"
VERSION = 1
HEADER = struct.Struct("<4sIfQ")


def encode_ppgb(record: RawRecord) -> bytes:
    samples = record.samples.astype("<f4")
    return HEADER.pack(MAGIC, VERSION, record.sample_rate_hz, samples.size) + samples.tobytes()


def decode_ppgb(payload: bytes) -> RawRecord:
    """
    Raises:
        ContainerFormatError: On a bad magic, unknown version or size mismatch.
    """
    if len(payload) < HEADER.size:
        raise ContainerFormatError("truncated PPGB header")
    magic, version, rate, count = HEADER.unpack_from(payload)
    if magic != MAGIC:
        raise ContainerFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise ContainerFormatError(f"unsupported PPGB version {version}")
    expected = HEADER.size + 4 * count
    if len(payload) != expected:
        raise ContainerFormatError(f"expected {expected} bytes for {count} samples, got {len(payload)}")
    samples = np.frombuffer(payload, dtype="<f4", offset=HEADER.size).astype(np.float64)
    return RawRecord(float(rate), samples)


def write_ppgb(path: str | Path, record: RawRecord) -> Path:
    path = Path(path)
    path.write_bytes(encode_ppgb(record))
    return path


def read_ppgb(path: str | Path) -> RawRecord:
    return decode_ppgb(Path(path).read_bytes())
