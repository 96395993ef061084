from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MaskPolicyError


@dataclass(frozen=True)
class MaskPolicyConfig:
    """
    Masking ratio, prior-bias weight and span bound of the masking policy.
    """

    ratio: float = 0.5
    alpha: float = 2.0
    max_span: int = 5
    std_floor: float = 1e-9

    def __post_init__(self) -> None:
        if not 0.0 < self.ratio < 1.0:
            raise MaskPolicyError(f"ratio must lie in (0, 1), got {self.ratio}")
        if self.alpha < 0:
            raise MaskPolicyError(f"alpha must be non-negative, got {self.alpha}")
        if self.max_span < 1:
            raise MaskPolicyError(f"max_span must be at least 1, got {self.max_span}")
        if self.std_floor <= 0:
            raise MaskPolicyError("std_floor must be positive")

    def masked_count(self, n_patches: int) -> int:
        return math.floor(self.ratio * n_patches)


@dataclass(frozen=True, eq=False)
class MaskSample:
    """
    One sampled mask.

    `order` holds the pre-repair selection sorted by descending perturbed
    value, and `log_prob` is its Plackett-Luce log-probability. `mask` is the
    span-repaired mask; before repair it equals `pre_repair_mask`.
    """

    mask: np.ndarray
    perturbed: np.ndarray
    order: np.ndarray
    log_prob: float
    pre_repair_mask: np.ndarray

    @property
    def k(self) -> int:
        return int(self.order.size)

    @property
    def popcount(self) -> int:
        return int(np.count_nonzero(self.mask))

    @property
    def repaired(self) -> bool:
        return bool(np.any(self.mask != self.pre_repair_mask))

    @property
    def complete(self) -> bool:
        """False when no span-valid mask with k positions exists."""
        return self.popcount == self.k


@dataclass(frozen=True)
class PolicyMetrics:
    entropy: float
    mean_prob_masked: float | None
    mean_prob_all: float
    teacher_loss: float

    def as_dict(self) -> dict[str, float | None]:
        return {
            "teacher_entropy": self.entropy,
            "teacher_prob_masked": self.mean_prob_masked,
            "teacher_prob_all": self.mean_prob_all,
            "teacher_loss": self.teacher_loss,
        }
