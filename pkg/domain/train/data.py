from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from domain.dsp.definitions import PatchSequence

from .errors import EmptyDataset, ShapeError


def as_dataset(segments: np.ndarray | Sequence[PatchSequence], patch_T: int, seq_N: int) -> np.ndarray:
    """
    Stack segments into a (S, N, T) float array.

    Raises:
        EmptyDataset: No segments.
        ShapeError: Ragged segments, a patch length other than patch_T, or
            more patches than the networks' position table holds.
    """
    if isinstance(segments, np.ndarray):
        data = np.asarray(segments, dtype=np.float64)
    else:
        if len(segments) == 0:
            raise EmptyDataset("no segments to train on")
        try:
            data = np.stack([s.patches if isinstance(s, PatchSequence) else np.asarray(s) for s in segments])
        except ValueError as exc:
            raise ShapeError("segments have different patch counts") from exc
        data = data.astype(np.float64)
    if data.ndim != 3:
        raise ShapeError(f"expected (S, N, T) patches, got {data.shape}")
    if data.shape[0] == 0:
        raise EmptyDataset("no segments to train on")
    if data.shape[2] != patch_T or data.shape[1] > seq_N:
        raise ShapeError(f"patches {data.shape[1:]} do not fit N <= {seq_N}, T == {patch_T}")
    return data


def batch_indices(indices: np.ndarray, batch_size: int, rng: np.random.Generator) -> Iterator[np.ndarray]:
    """Shuffled minibatches covering every index once; the last may be short."""
    order = rng.permutation(indices)
    for start in range(0, order.size, batch_size):
        yield order[start : start + batch_size]


def n_batches(n_items: int, batch_size: int) -> int:
    return -(-n_items // batch_size)
