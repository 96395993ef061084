from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from domain.masking.definitions import MaskPolicyConfig
from domain.vq.augment import AugmentConfig

from .errors import NonFiniteMetric, TrainConfigError

OBJECTIVES: dict[str, tuple[str, ...]] = {
    "amplitude": ("amplitude",),
    "raw": ("raw",),
    "phase": ("phase",),
    "amplitude+phase": ("amplitude", "phase"),
}
STRATEGIES = ("random", "static_prior", "adversarial", "prior_guided")


def _check_schedule(epochs: int, batch_size: int, warmup_epochs: int, peak_lr: float, min_lr: float) -> None:
    if epochs < 1 or batch_size < 1:
        raise TrainConfigError("epochs and batch_size must be positive")
    if not 0 <= warmup_epochs < epochs:
        raise TrainConfigError(f"warmup_epochs {warmup_epochs} must be below epochs {epochs}")
    if not 0 <= min_lr <= peak_lr:
        raise TrainConfigError(f"learning rates must satisfy 0 <= min_lr <= peak_lr, got {min_lr} and {peak_lr}")


@dataclass(frozen=True)
class Stage1Config:
    """Tokenizer training. Defaults are desk scale; betas and decay are the published values."""

    epochs: int = 50
    batch_size: int = 32
    peak_lr: float = 1e-3
    min_lr: float = 1e-6
    warmup_epochs: int = 5
    betas: tuple[float, float] = (0.9, 0.99)
    weight_decay: float = 1e-4
    grad_clip: float | None = None
    recon_objective: str = "amplitude"
    augment: AugmentConfig = field(default_factory=AugmentConfig)
    init_codebook_from_data: bool = False
    val_fraction: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "betas", tuple(self.betas))
        _check_schedule(self.epochs, self.batch_size, self.warmup_epochs, self.peak_lr, self.min_lr)
        if self.recon_objective not in OBJECTIVES:
            raise TrainConfigError(f"recon_objective must be one of {sorted(OBJECTIVES)}, got {self.recon_objective!r}")
        if not 0.0 <= self.val_fraction < 1.0:
            raise TrainConfigError(f"val_fraction must lie in [0, 1), got {self.val_fraction}")
        if self.grad_clip is not None and self.grad_clip <= 0:
            raise TrainConfigError("grad_clip must be positive when set")

    @property
    def decoder_targets(self) -> tuple[str, ...]:
        return OBJECTIVES[self.recon_objective]


@dataclass(frozen=True)
class Stage2Config:
    """
    Masked pretraining of the student against the masking teacher.

    Student and teacher each get an optimizer and a schedule built from the
    same learning-rate settings. Patches are labelled peak when both S_amp
    and S_skew reach their thresholds and flat when both fall below.
    """

    epochs: int = 50
    batch_size: int = 32
    peak_lr: float = 3e-3
    min_lr: float = 1e-5
    warmup_epochs: int = 5
    betas: tuple[float, float] = (0.9, 0.98)
    weight_decay: float = 0.05
    grad_clip: float = 2.0
    policy: MaskPolicyConfig = field(default_factory=MaskPolicyConfig)
    strategy: str = "prior_guided"
    amp_threshold: float = 0.5
    skew_threshold: float = 0.5
    ema_decay: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "betas", tuple(self.betas))
        _check_schedule(self.epochs, self.batch_size, self.warmup_epochs, self.peak_lr, self.min_lr)
        if self.strategy not in STRATEGIES:
            raise TrainConfigError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if not (0.0 <= self.amp_threshold <= 1.0 and 0.0 <= self.skew_threshold <= 1.0):
            raise TrainConfigError("peak/flat thresholds must lie in [0, 1]")
        if self.ema_decay is not None and not 0.0 <= self.ema_decay <= 1.0:
            raise TrainConfigError(f"ema_decay must lie in [0, 1], got {self.ema_decay}")
        if self.grad_clip <= 0:
            raise TrainConfigError("grad_clip must be positive")

    @property
    def uses_teacher(self) -> bool:
        return self.strategy in ("adversarial", "prior_guided")

    @property
    def bias_weight(self) -> float:
        """The alpha applied to the prior bias under this strategy."""
        return self.policy.alpha if self.strategy in ("static_prior", "prior_guided") else 0.0


@dataclass
class TrainHistory:
    """One row of metrics per epoch. Missing values (an empty class) are None."""

    stage: str
    rows: list[dict[str, Any]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def append(self, epoch: int, **metrics: float | None) -> None:
        for name, value in metrics.items():
            if value is not None and not math.isfinite(value):
                raise NonFiniteMetric(f"{self.stage} epoch {epoch}: {name} is {value}")
        self.rows.append({"epoch": epoch, **metrics})

    def column(self, name: str) -> np.ndarray:
        return np.array([np.nan if row.get(name) is None else row[name] for row in self.rows], dtype=np.float64)

    def first(self, name: str) -> float | None:
        return self.rows[0].get(name) if self.rows else None

    def final(self, name: str) -> float | None:
        return self.rows[-1].get(name) if self.rows else None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame.from_records(self.rows)

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        self.to_frame().to_csv(path, index=False)
        return path
