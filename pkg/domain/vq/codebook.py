from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from domain.ndgrad import ops
from domain.ndgrad.module import Module, parameter, trunc_normal
from domain.ndgrad.tensor import Tensor

from .errors import DegenerateCodebook, ShapeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class QuantizeResult:
    """Nearest-code assignment of a (..., D) batch of latents."""

    indices: np.ndarray
    vectors: np.ndarray
    distances: np.ndarray | None = None


class Codebook(Module):
    """
    K learnable code vectors of width D and a per-epoch usage histogram.
    """

    def __init__(self, K: int, D: int, rng: np.random.Generator, std: float = 0.1) -> None:
        if K < 2:
            raise DegenerateCodebook(f"a codebook needs at least two codes, got {K}")
        self.vectors = parameter(trunc_normal(rng, (K, D), std))
        self.usage = np.zeros(K, dtype=np.int64)

    @property
    def K(self) -> int:
        return int(self.vectors.shape[0])

    @property
    def D(self) -> int:
        return int(self.vectors.shape[1])

    def initialize_from(self, latents: np.ndarray, rng: np.random.Generator) -> None:
        """Seed the codes with randomly chosen latents (with replacement when too few)."""
        rows = np.asarray(latents, dtype=np.float64).reshape(-1, self.D)
        chosen = rng.choice(rows.shape[0], size=self.K, replace=rows.shape[0] < self.K)
        jitter = rng.normal(0.0, 1e-3, size=(self.K, self.D))
        self.vectors.data[...] = rows[chosen] + jitter

    def quantize(self, h: Tensor | np.ndarray, track: bool = True, keep_distances: bool = False) -> QuantizeResult:
        """
        Assign every latent to its nearest code by squared Euclidean distance;
        ties go to the lowest index.

        Args:
            h: (..., D) latents.
            track: Add the assignments to the usage histogram.
            keep_distances: Return the (..., K) squared distance matrix.

        Raises:
            ShapeError: If the latent width differs from D.
        """
        data = h.data if isinstance(h, Tensor) else np.asarray(h, dtype=np.float64)
        if data.shape[-1] != self.D:
            raise ShapeError(f"latents of width {data.shape[-1]} against codes of width {self.D}")
        flat = data.reshape(-1, self.D)
        distances = cdist(flat, self.vectors.data, metric="sqeuclidean")
        indices = np.argmin(distances, axis=1)
        if track:
            self.usage += np.bincount(indices, minlength=self.K)
        lead = data.shape[:-1]
        return QuantizeResult(
            indices=indices.reshape(lead),
            vectors=self.vectors.data[indices].reshape(data.shape),
            distances=distances.reshape(lead + (self.K,)) if keep_distances else None,
        )

    def lookup(self, indices: np.ndarray) -> Tensor:
        """Code vectors as a tensor whose gradient reaches the codebook."""
        return ops.embedding_lookup(self.vectors, indices)

    def reset_usage(self) -> None:
        self.usage[...] = 0

    def unused_codes(self) -> int:
        return int(np.count_nonzero(self.usage == 0))


def quantize(h: Tensor | np.ndarray, codebook: Codebook, track: bool = True) -> QuantizeResult:
    return codebook.quantize(h, track=track)


def unused_codes(codebook: Codebook | np.ndarray) -> int:
    """Codes with no hits in the histogram (a Codebook or a bare count array)."""
    if isinstance(codebook, Codebook):
        return codebook.unused_codes()
    return int(np.count_nonzero(np.asarray(codebook) == 0))
