"""
Service layer for drawing masks over preprocessed segments.

Each segment draws from its own stream, element_rng(seed, i), so a mask
does not depend on which other segments are in the directory listing
before it.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from domain.masking import (
    MaskSample,
    element_rng,
    final_logits,
    prior_bias,
    random_mask,
    sample_mask,
    static_prior_mask,
)
from domain.masking.errors import InvalidK
from domain.nets import TeacherNet
from domain.priors import score_segment
from domain.train.definitions import STRATEGIES

from ..config import ConfigError, RunConfig
from .manifest_service import ManifestService
from .signal_service import SignalService
from .training_service import TrainingService

logger = logging.getLogger(__name__)

RECORD_COLUMNS = ["segment_id", "strategy", "k", "mask", "log_prob", "pre_repair_popcount", "repaired"]


class MaskingService:
    """
    Service class for mask generation.

    Strategies:
    - random: uniform over k-subsets, then span repair
    - static_prior: scores proportional to S_prior, no teacher
    - adversarial: teacher logits only
    - prior_guided: teacher logits (zeros without a teacher) plus alpha * bias
    """

    @staticmethod
    def draw(
        config: RunConfig,
        strategy: str,
        patches: np.ndarray,
        rng: np.random.Generator,
        teacher: TeacherNet | None = None,
    ) -> MaskSample:
        """
        Draw one mask for a single (N, T) segment.

        Raises:
            ConfigError: Unknown strategy, or adversarial without a teacher
            InvalidK: floor(ratio * N) is zero
        """
        if strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {strategy!r}; choose from {list(STRATEGIES)}")
        policy = config.policy
        n_patches = patches.shape[0]
        k = policy.masked_count(n_patches)
        if k < 1:
            raise InvalidK(f"ratio {policy.ratio} masks no patch of {n_patches}")
        if strategy == "random":
            return random_mask(n_patches, k, rng, policy.max_span)
        s_prior = score_segment(patches, config.priors).s_prior
        if strategy == "static_prior":
            return static_prior_mask(s_prior, k, rng, policy.max_span)
        if strategy == "adversarial" and teacher is None:
            raise ConfigError("the adversarial strategy needs a teacher checkpoint")
        logits = teacher(patches).data[0] if teacher is not None else np.zeros(n_patches)
        if strategy == "prior_guided":
            logits = final_logits(logits, prior_bias(s_prior, policy.std_floor), policy.alpha)
        return sample_mask(logits, k, policy.max_span, rng)

    @staticmethod
    def mask_directory(
        config: RunConfig,
        in_dir: str | Path,
        strategy: str,
        teacher_path: str | Path | None = None,
    ) -> pd.DataFrame:
        """
        One mask record per segment of a preprocessed directory, seeded by
        config.stage2.seed.
        """
        teacher = TrainingService.load_network(teacher_path, "teacher") if teacher_path else None
        if strategy == "adversarial" and teacher is None:
            raise ConfigError("the adversarial strategy needs --teacher")
        names, sequences = SignalService.load_patches(in_dir)
        seed = config.stage2.seed
        rows = []
        for i, (name, seq) in enumerate(zip(names, sequences)):
            sample = MaskingService.draw(config, strategy, seq.patches, element_rng(seed, i), teacher)
            rows.append(
                {
                    "segment_id": name,
                    "strategy": strategy,
                    "k": sample.k,
                    "mask": sample.mask.astype(int).tolist(),
                    "log_prob": sample.log_prob,
                    "pre_repair_popcount": int(sample.pre_repair_mask.sum()),
                    "repaired": sample.repaired,
                }
            )
        return pd.DataFrame(rows, columns=RECORD_COLUMNS)

    @staticmethod
    def write_masks(
        config: RunConfig,
        in_dir: str | Path,
        out_path: str | Path,
        strategy: str,
        teacher_path: str | Path | None = None,
    ) -> pd.DataFrame:
        """
        Write the mask records as JSON lines, with a manifest beside them.
        """
        out_path = Path(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        frame = MaskingService.mask_directory(config, in_dir, strategy, teacher_path)
        frame.to_json(out_path, orient="records", lines=True)
        ManifestService.write_manifest(
            out_path,
            "mask",
            config,
            arguments={
                "in": Path(in_dir),
                "out": out_path,
                "strategy": strategy,
                "teacher": str(teacher_path) if teacher_path else None,
            },
            outputs=[out_path.name],
            count=len(frame),
        )
        logger.info("wrote %d %s masks to %s", len(frame), strategy, out_path)
        return frame
