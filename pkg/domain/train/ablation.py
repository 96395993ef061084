"""
Toy-scale comparison harnesses: the four masking strategies and the prior
mixing weight beta.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Sequence

import numpy as np
import pandas as pd

from domain.priors.definitions import PriorConfig

from .definitions import STRATEGIES, Stage2Config, TrainHistory
from .pretrain import pretrain
from .tokenizer import Tokenizer

logger = logging.getLogger(__name__)

DEFAULT_BETAS = (0.0, 0.3, 0.5, 0.7, 1.0)
SUMMARY_COLUMNS = (
    "student_ce",
    "acc_all",
    "acc_peak",
    "acc_flat",
    "teacher_entropy",
    "masked_s_prior",
    "masked_s_amp",
    "masked_s_skew",
)


def _final_row(history: TrainHistory) -> dict[str, float | None]:
    return {name: history.final(name) for name in SUMMARY_COLUMNS}


def ablation_masking(
    dataset: np.ndarray,
    tokenizer: Tokenizer,
    cfg: Stage2Config,
    prior_cfg: PriorConfig = PriorConfig(),
    strategies: Sequence[str] = STRATEGIES,
) -> tuple[pd.DataFrame, dict[str, TrainHistory]]:
    """Pretrain once per strategy on the same data and seed; one summary row each."""
    histories: dict[str, TrainHistory] = {}
    rows = []
    for strategy in strategies:
        _, _, history = pretrain(dataset, tokenizer, replace(cfg, strategy=strategy), prior_cfg)
        histories[strategy] = history
        rows.append({"strategy": strategy, **_final_row(history)})
        logger.info("ablation: %s finished with CE %.4f", strategy, history.final("student_ce"))
    return pd.DataFrame(rows, columns=["strategy", *SUMMARY_COLUMNS]), histories


def sweep_beta(
    dataset: np.ndarray,
    tokenizer: Tokenizer,
    cfg: Stage2Config,
    betas: Sequence[float] = DEFAULT_BETAS,
    prior_cfg: PriorConfig = PriorConfig(),
) -> tuple[pd.DataFrame, dict[float, TrainHistory]]:
    """
    Pretrain once per beta. The frame stacks every epoch of every run with
    a leading beta column.
    """
    histories: dict[float, TrainHistory] = {}
    frames = []
    for beta in betas:
        _, _, history = pretrain(dataset, tokenizer, cfg, replace(prior_cfg, beta=beta))
        histories[beta] = history
        frame = history.to_frame()
        frame.insert(0, "beta", beta)
        frames.append(frame)
        logger.info("beta sweep: beta=%.2f finished with CE %.4f", beta, history.final("student_ce"))
    return pd.concat(frames, ignore_index=True), histories
