from __future__ import annotations

import numpy as np

from .definitions import PatchSequence, Segment
from .errors import PatchMismatch, ShapeError

PATCH_LEN = 50


def patchify(segment: Segment | np.ndarray, patch_len: int = PATCH_LEN) -> PatchSequence:
    """
    Split a segment into consecutive, non-overlapping patches.

    Raises:
        PatchMismatch: If the length is not a multiple of patch_len.
    """
    samples = segment.samples if isinstance(segment, Segment) else np.asarray(segment, dtype=np.float64)
    if patch_len < 1 or samples.size % patch_len:
        raise PatchMismatch(f"length {samples.size} is not divisible by patch length {patch_len}")
    return PatchSequence(samples.reshape(-1, patch_len).copy())


def amplitude_spectrum(patch: np.ndarray) -> np.ndarray:
    """
    One-sided DFT magnitudes along the last axis, floor(T/2) + 1 values.
    Works on a single patch or any stack of patches.
    """
    patch = np.asarray(patch, dtype=np.float64)
    if patch.shape[-1] < 2:
        raise ShapeError(f"spectrum needs at least 2 samples, got {patch.shape[-1]}")
    return np.abs(np.fft.rfft(patch, axis=-1))


def phase_spectrum(patch: np.ndarray) -> np.ndarray:
    """Principal-value angles in (-pi, pi] of the one-sided DFT."""
    patch = np.asarray(patch, dtype=np.float64)
    if patch.shape[-1] < 2:
        raise ShapeError(f"spectrum needs at least 2 samples, got {patch.shape[-1]}")
    return np.angle(np.fft.rfft(patch, axis=-1))


def spectrum_len(patch_len: int) -> int:
    return patch_len // 2 + 1
