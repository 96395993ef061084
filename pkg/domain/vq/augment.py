from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AugmentConfigError


@dataclass(frozen=True)
class AugmentConfig:
    """Random amplitude scaling followed by additive Gaussian noise."""

    scale_low: float = 0.98
    scale_high: float = 1.02
    noise_sigma: float = 0.02
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.scale_low <= 1.0 <= self.scale_high:
            raise AugmentConfigError(f"scale range [{self.scale_low}, {self.scale_high}] must contain 1")
        if self.noise_sigma < 0:
            raise AugmentConfigError("noise_sigma must be non-negative")


PRESETS: dict[str, AugmentConfig] = {
    "identical": AugmentConfig(1.0, 1.0, 0.0),
    "scale_only": AugmentConfig(0.97, 1.03, 0.0),
    "combined_weak": AugmentConfig(0.98, 1.02, 0.02),
    "noise_only": AugmentConfig(1.0, 1.0, 0.03),
    "combined_medium": AugmentConfig(0.95, 1.05, 0.05),
}


def augment(patch: np.ndarray, cfg: AugmentConfig, rng: np.random.Generator) -> np.ndarray:
    """
    x' = s * x + noise, with one scale s per patch (last axis) and noise drawn
    independently for every sample.
    """
    patch = np.asarray(patch, dtype=np.float64)
    scale = rng.uniform(cfg.scale_low, cfg.scale_high, size=patch.shape[:-1] + (1,))
    noise = rng.normal(0.0, cfg.noise_sigma, size=patch.shape) if cfg.noise_sigma > 0 else 0.0
    return scale * patch + noise
