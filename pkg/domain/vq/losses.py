"""
Tokenizer training losses. All are means over every element.
"""

from __future__ import annotations

import numpy as np

from domain.ndgrad import ops
from domain.ndgrad.tensor import Tensor

from .errors import ShapeError

COMMITMENT = 0.25


def _same_shape(a: Tensor, b: Tensor, name: str) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"{name}: shapes {a.shape} and {b.shape} differ")


def vq_loss(h: Tensor, e_z: Tensor, commitment: float = COMMITMENT) -> Tensor:
    """Codebook term pulls e_z to the frozen latents; the commitment term pulls h to the frozen codes."""
    _same_shape(h, e_z, "vq_loss")
    codebook_term = ops.mean(ops.square(ops.sub(ops.stop_gradient(h), e_z)))
    commitment_term = ops.mean(ops.square(ops.sub(h, ops.stop_gradient(e_z))))
    return ops.add(codebook_term, ops.mul(commitment_term, commitment))


def consistency_loss(h_orig: Tensor, h_aug: Tensor) -> Tensor:
    """Only the augmented branch receives gradient."""
    _same_shape(h_orig, h_aug, "consistency_loss")
    return ops.mean(ops.square(ops.sub(ops.stop_gradient(h_orig), h_aug)))


def spectral_loss(decoded: Tensor, target: Tensor | np.ndarray) -> Tensor:
    """Mean absolute error; used for spectra and raw patches alike."""
    target = target if isinstance(target, Tensor) else Tensor(target)
    _same_shape(decoded, target, "spectral_loss")
    return ops.mean(ops.abs(ops.sub(decoded, target)))
