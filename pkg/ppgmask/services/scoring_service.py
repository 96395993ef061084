"""
Service layer for per-patch prior scores.
"""

from __future__ import annotations

import logging
from pathlib import Path

import pandas as pd

from domain.priors import score_segment

from ..config import RunConfig
from .manifest_service import ManifestService
from .signal_service import SignalService

logger = logging.getLogger(__name__)


class ScoringService:
    """
    Service class for scoring preprocessed segments.
    """

    @staticmethod
    def score_directory(config: RunConfig, in_dir: str | Path) -> pd.DataFrame:
        """
        Score every patch of every segment in a preprocessed directory.

        Returns:
            pd.DataFrame: One row per patch, segment by segment
        """
        names, sequences = SignalService.load_patches(in_dir)
        frames = [score_segment(seq, config.priors).to_frame(name) for name, seq in zip(names, sequences)]
        return pd.concat(frames, ignore_index=True)

    @staticmethod
    def write_scores(config: RunConfig, in_dir: str | Path, out_path: str | Path) -> pd.DataFrame:
        """
        Write the score table as CSV, with a manifest beside it.

        Args:
            config: Run configuration; the priors section is read
            in_dir: Preprocessed segment directory
            out_path: CSV file to write

        Returns:
            pd.DataFrame: The table written
        """
        out_path = Path(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        frame = ScoringService.score_directory(config, in_dir)
        frame.to_csv(out_path, index=False)
        ManifestService.write_manifest(
            out_path,
            "score",
            config,
            arguments={"in": Path(in_dir), "out": out_path},
            outputs=[out_path.name],
            rows=len(frame),
        )
        logger.info("wrote %d patch scores to %s", len(frame), out_path)
        return frame
