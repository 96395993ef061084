"""
Service layer for diagnostics: codebook geometry and gradient checks.
"""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from domain.ndgrad import GradCheckResult, op_suite
from domain.nets import network_suite
from domain.train import Tokenizer, augmentation_geometry
from domain.vq import PRESETS

from ..config import RunConfig
from .manifest_service import ManifestService
from .signal_service import SignalService

logger = logging.getLogger(__name__)

REFERENCE_PRESET = "combined_weak"


class ValidationService:
    """
    Service class for diagnostic reports.
    """

    @staticmethod
    def sample_segments(data: np.ndarray, max_pairs: int, rng: np.random.Generator) -> np.ndarray:
        """The fewest whole segments of an (S, N, T) dataset holding max_pairs patches, in dataset order."""
        n_segments = min(data.shape[0], math.ceil(max_pairs / data.shape[1]))
        if n_segments == data.shape[0]:
            return data
        return data[np.sort(rng.choice(data.shape[0], size=n_segments, replace=False))]

    @staticmethod
    def codebook_report(
        config: RunConfig,
        in_dir: str | Path,
        tokenizer_path: str | Path | None = None,
        max_pairs: int = 2048,
        presets: Sequence[str] = tuple(PRESETS),
    ) -> dict[str, Any]:
        """
        Measure how far augmentations move latents relative to the codebook.

        Without a tokenizer checkpoint an untrained tokenizer is built from
        the net and stage1 sections, which gives a baseline to compare
        trained codebooks against.

        Returns:
            dict: voronoi_radius, mean_ratio and icr_by_quartile for the
            reference preset, plus a full summary per preset
        """
        if tokenizer_path is not None:
            tokenizer = Tokenizer.load(tokenizer_path)
        else:
            rng = np.random.default_rng(config.stage1.seed)
            tokenizer = Tokenizer(config.net, rng, config.stage1.recon_objective)
        _, data = SignalService.load_dataset(in_dir)
        rng = np.random.default_rng(config.stage1.augment.seed)
        segments = ValidationService.sample_segments(data, max_pairs, rng)
        reports = augmentation_geometry(tokenizer, segments, {name: PRESETS[name] for name in presets}, rng, max_pairs)
        by_preset = {name: report.summary() for name, report in reports.items()}
        reference = by_preset.get(REFERENCE_PRESET) or next(iter(by_preset.values()))
        return {
            "trained": tokenizer_path is not None,
            "n_pairs": min(max_pairs, int(segments.shape[0] * segments.shape[1])),
            "voronoi_radius": reference["voronoi_radius"],
            "mean_ratio": reference["mean_ratio"],
            "icr_by_quartile": reference["icr_by_quartile"],
            "icr_by_augmentation": {name: summary["icr"] for name, summary in by_preset.items()},
            "presets": by_preset,
        }

    @staticmethod
    def write_codebook_report(
        config: RunConfig,
        in_dir: str | Path,
        out_path: str | Path,
        tokenizer_path: str | Path | None = None,
        max_pairs: int = 2048,
    ) -> dict[str, Any]:
        out_path = Path(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        report = ValidationService.codebook_report(config, in_dir, tokenizer_path, max_pairs)
        out_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
        ManifestService.write_manifest(
            out_path,
            "validate_codebook",
            config,
            arguments={
                "in": Path(in_dir),
                "out": out_path,
                "tokenizer": str(tokenizer_path) if tokenizer_path else None,
                "max_pairs": max_pairs,
            },
            outputs=[out_path.name],
        )
        return report

    @staticmethod
    def gradient_checks(seed: int = 0) -> list[GradCheckResult]:
        """Finite-difference checks of every differentiable op, then of the four networks end to end."""
        results = op_suite(seed) + network_suite(seed)
        failed = [r.name for r in results if not r.passed]
        if failed:
            logger.warning("gradient check failed for: %s", ", ".join(failed))
        return results
