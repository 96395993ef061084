"""
Service layer for both training stages and the comparison harnesses.

Every run writes its checkpoints and histories into one output directory
together with a manifest that echoes the effective configuration.
"""

from __future__ import annotations

import logging
from dataclasses import asdict
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from domain.ndgrad import Module
from domain.ndgrad.checkpoint import load_checkpoint, save_checkpoint
from domain.nets import NetConfig, StudentNet, TeacherNet
from domain.train import Tokenizer, TrainHistory, ablation_masking, pretrain, sweep_beta, train_tokenizer
from domain.train.definitions import STRATEGIES
from domain.train.errors import TrainConfigError

from ..config import RunConfig
from .manifest_service import ManifestService
from .signal_service import SignalService

logger = logging.getLogger(__name__)

TOKENIZER_FILE = "tokenizer.ckpt"
HISTORY_FILE = "history.csv"
NETWORKS: dict[str, type] = {"student": StudentNet, "teacher": TeacherNet}


class TrainingService:
    """
    Service class for training runs.

    Encapsulates:
    - Stage 1 tokenizer training
    - Stage 2 masked pretraining
    - Masking-strategy ablation and the beta sweep
    - Saving and reloading the student and teacher networks
    """

    @staticmethod
    def save_network(path: str | Path, kind: str, network: Module, step: int = 0, **extra: object) -> Path:
        metadata = {"kind": kind, "net": asdict(network.cfg), **extra}
        return save_checkpoint(path, network.state_dict(), step=step, metadata=metadata)

    @staticmethod
    def load_network(path: str | Path, kind: str) -> Module:
        """
        Rebuild a student or teacher from a checkpoint.

        Raises:
            TrainConfigError: The checkpoint holds another kind of network
            CheckpointFormatError: The file is not a checkpoint
        """
        checkpoint = load_checkpoint(path)
        if checkpoint.metadata.get("kind") != kind:
            raise TrainConfigError(f"{path} does not hold a {kind} checkpoint")
        network = NETWORKS[kind](NetConfig(**checkpoint.metadata["net"]), np.random.default_rng(0))
        network.load_state_dict(checkpoint.tensors)
        return network

    @staticmethod
    def _write_history(out_dir: Path, history: TrainHistory, name: str = HISTORY_FILE) -> str:
        history.to_csv(out_dir / name)
        return name

    @staticmethod
    def run_tokenizer(config: RunConfig, in_dir: str | Path, out_dir: str | Path) -> TrainHistory:
        """
        Train the tokenizer on a preprocessed directory.

        Writes tokenizer.ckpt, history.csv and a manifest into out_dir.

        Returns:
            TrainHistory: Per-epoch losses and codebook usage
        """
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        _, data = SignalService.load_dataset(in_dir)
        tokenizer, _, history = train_tokenizer(data, config.stage1, config.net)
        tokenizer.save(out_dir / TOKENIZER_FILE, step=config.stage1.epochs, seed=config.stage1.seed)
        outputs = [TOKENIZER_FILE, TrainingService._write_history(out_dir, history)]
        ManifestService.write_manifest(
            out_dir,
            "train_tokenizer",
            config,
            arguments={"in": Path(in_dir), "out": out_dir},
            outputs=outputs,
            segments=int(data.shape[0]),
            final_L_total=history.final("L_total"),
        )
        return history

    @staticmethod
    def _stage2_inputs(in_dir: str | Path, tokenizer_path: str | Path) -> tuple[np.ndarray, Tokenizer]:
        _, data = SignalService.load_dataset(in_dir)
        return data, Tokenizer.load(tokenizer_path)

    @staticmethod
    def run_pretrain(
        config: RunConfig, in_dir: str | Path, tokenizer_path: str | Path, out_dir: str | Path
    ) -> TrainHistory:
        """
        Pretrain the student with the configured masking strategy.

        Writes student.ckpt, teacher.ckpt, history.csv and a manifest. The
        teacher checkpoint is written for every strategy so a run can be
        resumed or compared, even when the strategy never trained it.
        """
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        data, tokenizer = TrainingService._stage2_inputs(in_dir, tokenizer_path)
        student, teacher, history = pretrain(data, tokenizer, config.stage2, config.priors)
        step = config.stage2.epochs
        extra = {"strategy": config.stage2.strategy, "seed": config.stage2.seed}
        TrainingService.save_network(out_dir / "student.ckpt", "student", student, step, **extra)
        TrainingService.save_network(out_dir / "teacher.ckpt", "teacher", teacher, step, **extra)
        outputs = ["student.ckpt", "teacher.ckpt", TrainingService._write_history(out_dir, history)]
        ManifestService.write_manifest(
            out_dir,
            "pretrain",
            config,
            arguments={"in": Path(in_dir), "tokenizer": Path(tokenizer_path), "out": out_dir},
            outputs=outputs,
            final_student_ce=history.final("student_ce"),
        )
        return history

    @staticmethod
    def run_ablation(
        config: RunConfig,
        in_dir: str | Path,
        tokenizer_path: str | Path,
        out_dir: str | Path,
        strategies: Sequence[str] = STRATEGIES,
    ) -> pd.DataFrame:
        """
        Compare masking strategies on identical data, seed and tokenizer.

        Writes ablation.csv (one summary row per strategy) and one
        history_<strategy>.csv per run.
        """
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        data, tokenizer = TrainingService._stage2_inputs(in_dir, tokenizer_path)
        summary, histories = ablation_masking(data, tokenizer, config.stage2, config.priors, strategies)
        summary.to_csv(out_dir / "ablation.csv", index=False)
        outputs = ["ablation.csv"]
        for strategy, history in histories.items():
            outputs.append(TrainingService._write_history(out_dir, history, f"history_{strategy}.csv"))
        ManifestService.write_manifest(
            out_dir,
            "ablate_masking",
            config,
            arguments={
                "in": Path(in_dir),
                "tokenizer": Path(tokenizer_path),
                "out": out_dir,
                "strategies": list(strategies),
            },
            outputs=outputs,
        )
        return summary

    @staticmethod
    def run_beta_sweep(
        config: RunConfig,
        in_dir: str | Path,
        tokenizer_path: str | Path,
        out_dir: str | Path,
        betas: Sequence[float],
    ) -> pd.DataFrame:
        """
        Pretrain once per beta; writes every epoch of every run to sweep_beta.csv.
        """
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        data, tokenizer = TrainingService._stage2_inputs(in_dir, tokenizer_path)
        frame, _ = sweep_beta(data, tokenizer, config.stage2, betas, config.priors)
        frame.to_csv(out_dir / "sweep_beta.csv", index=False)
        ManifestService.write_manifest(
            out_dir,
            "sweep_beta",
            config,
            arguments={"in": Path(in_dir), "tokenizer": Path(tokenizer_path), "out": out_dir, "betas": list(betas)},
            outputs=["sweep_beta.csv"],
        )
        return frame
