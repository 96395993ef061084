from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from .errors import PriorConfigError


@dataclass(frozen=True)
class PriorConfig:
    """Constants of the amplitude-stability and skewness scores."""

    sigma_min: float = 0.05
    sigma_max: float = 2.0
    k_rise: float = 50.0
    k_fall: float = 5.0
    rel_coeff: float = 0.2
    mad_const: float = 0.6745
    beta: float = 0.5
    mad_floor: float = 1e-9

    def __post_init__(self) -> None:
        if not self.sigma_min < self.sigma_max:
            raise PriorConfigError(f"sigma_min {self.sigma_min} must be below sigma_max {self.sigma_max}")
        if self.k_rise <= 0 or self.k_fall <= 0:
            raise PriorConfigError("gate slopes k_rise and k_fall must be positive")
        if not 0.0 <= self.beta <= 1.0:
            raise PriorConfigError(f"beta must lie in [0, 1], got {self.beta}")
        if self.mad_floor <= 0:
            raise PriorConfigError("mad_floor must be positive")


@dataclass(frozen=True, eq=False)
class PriorScores:
    """Per-patch scores of one segment; every field has length N."""

    sigma: np.ndarray
    s_rel: np.ndarray
    s_abs: np.ndarray
    s_amp: np.ndarray
    s_skew: np.ndarray
    s_prior: np.ndarray

    def __len__(self) -> int:
        return int(self.s_prior.size)

    def to_frame(self, segment_id: str = "") -> pd.DataFrame:
        return pd.DataFrame(
            {
                "segment_id": segment_id,
                "patch_index": np.arange(len(self)),
                "sigma": self.sigma,
                "S_rel": self.s_rel,
                "S_abs": self.s_abs,
                "S_amp": self.s_amp,
                "S_skew": self.s_skew,
                "S_prior": self.s_prior,
            }
        )
