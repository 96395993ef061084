"""
Stage 1: the vector-quantized tokenizer and its training loop.
"""

from __future__ import annotations

import logging
from dataclasses import asdict
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from domain.dsp.spectra import amplitude_spectrum, phase_spectrum
from domain.ndgrad import ops
from domain.ndgrad.checkpoint import load_checkpoint, save_checkpoint
from domain.ndgrad.module import Module
from domain.ndgrad.optim import AdamW, cosine_schedule
from domain.ndgrad.tensor import Tensor, backward
from domain.nets.definitions import NetConfig
from domain.nets.models import TokenizerDecoder, TokenizerEncoder
from domain.vq.augment import AugmentConfig, augment
from domain.vq.codebook import Codebook
from domain.vq.geometry import GeometryReport, geometry_report
from domain.vq.losses import consistency_loss, spectral_loss, vq_loss

from .data import as_dataset, batch_indices, n_batches
from .definitions import OBJECTIVES, Stage1Config, TrainHistory
from .errors import TrainConfigError

logger = logging.getLogger(__name__)

ENCODE_CHUNK = 64


def recon_targets(patches: np.ndarray, targets: tuple[str, ...]) -> dict[str, np.ndarray]:
    builders = {"amplitude": amplitude_spectrum, "phase": phase_spectrum, "raw": np.asarray}
    return {name: builders[name](patches) for name in targets}


class Tokenizer(Module):
    """Encoder, codebook and decoder trained together in stage 1."""

    def __init__(self, net_cfg: NetConfig, rng: np.random.Generator, objective: str = "amplitude") -> None:
        if objective not in OBJECTIVES:
            raise TrainConfigError(f"unknown reconstruction objective {objective!r}")
        self.net_cfg = net_cfg
        self.objective = objective
        self.encoder = TokenizerEncoder(net_cfg, rng)
        self.codebook = Codebook(net_cfg.codebook_K, net_cfg.codebook_D, rng)
        self.decoder = TokenizerDecoder(net_cfg, rng, OBJECTIVES[objective])

    def losses(self, patches: np.ndarray, augmented: np.ndarray, track: bool = True) -> dict[str, Tensor]:
        """
        The stage-1 objective on one batch.

        The decoder reads the quantized vectors through a straight-through
        estimator, so reconstruction gradients reach the encoder unchanged.
        """
        h = self.encoder(patches)
        h_aug = self.encoder(augmented)
        quantized = self.codebook.quantize(h, track=track)
        e_z = self.codebook.lookup(quantized.indices)
        outputs = self.decoder(ops.straight_through(e_z.data, h))
        targets = recon_targets(patches, self.decoder.targets)
        spec = spectral_loss(outputs[self.decoder.targets[0]], targets[self.decoder.targets[0]])
        for name in self.decoder.targets[1:]:
            spec = ops.add(spec, spectral_loss(outputs[name], targets[name]))
        vq = vq_loss(h, e_z)
        con = consistency_loss(h, h_aug)
        return {"L_spec": spec, "L_vq": vq, "L_con": con, "L_total": ops.add(ops.add(spec, vq), con)}

    def latents(self, patches: np.ndarray) -> np.ndarray:
        """Pre-quantization latents (S, N, D) as a plain array."""
        data = np.asarray(patches, dtype=np.float64)
        chunks = [self.encoder(Tensor(data[i : i + ENCODE_CHUNK])).data for i in range(0, data.shape[0], ENCODE_CHUNK)]
        return np.concatenate(chunks, axis=0)

    def tokenize(self, patches: np.ndarray) -> np.ndarray:
        """Token ids (S, N); the usage histogram is left untouched."""
        return self.codebook.quantize(self.latents(patches), track=False).indices

    def metadata(self) -> dict[str, Any]:
        return {"kind": "tokenizer", "net": asdict(self.net_cfg), "objective": self.objective}

    def save(self, path: str | Path, step: int = 0, **extra: Any) -> Path:
        return save_checkpoint(path, self.state_dict(), step=step, metadata={**self.metadata(), **extra})

    @classmethod
    def load(cls, path: str | Path) -> Tokenizer:
        """Rebuild a tokenizer from a checkpoint written by save(); it comes back frozen."""
        checkpoint = load_checkpoint(path)
        meta = checkpoint.metadata
        if meta.get("kind") != "tokenizer":
            raise TrainConfigError(f"{path} does not hold a tokenizer checkpoint")
        tokenizer = cls(NetConfig(**meta["net"]), np.random.default_rng(0), meta["objective"])
        tokenizer.load_state_dict(checkpoint.tensors)
        tokenizer.freeze()
        return tokenizer


def augmentation_geometry(
    tokenizer: Tokenizer,
    segments: np.ndarray,
    presets: Mapping[str, AugmentConfig],
    rng: np.random.Generator,
    max_pairs: int | None = None,
) -> dict[str, GeometryReport]:
    """
    Codebook geometry of augmentation pairs, one report per preset.

    Each (S, N, T) segment is augmented as a whole and both copies are
    encoded in full context, so every pair is the latent of a patch and of
    its augmented self at the same position. With max_pairs set, the same
    random subset of positions is kept for every preset.
    """
    data = np.asarray(segments, dtype=np.float64)
    h = tokenizer.latents(data).reshape(-1, tokenizer.net_cfg.codebook_D)
    rows = np.arange(h.shape[0])
    if max_pairs is not None and h.shape[0] > max_pairs:
        rows = np.sort(rng.choice(h.shape[0], size=max_pairs, replace=False))
    vectors = tokenizer.codebook.vectors.data
    reports = {}
    for name, cfg in presets.items():
        h_aug = tokenizer.latents(augment(data, cfg, rng)).reshape(h.shape)
        reports[name] = geometry_report(h[rows], h_aug[rows], vectors)
    return reports


def _split(n_segments: int, val_fraction: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    order = rng.permutation(n_segments)
    n_val = int(round(val_fraction * n_segments))
    if n_val >= n_segments:
        raise TrainConfigError(f"val_fraction {val_fraction} leaves no training segments out of {n_segments}")
    return np.sort(order[n_val:]), np.sort(order[:n_val])


def _validation_loss(tokenizer: Tokenizer, data: np.ndarray, cfg: Stage1Config, epoch: int) -> float:
    rng = np.random.default_rng([cfg.seed, epoch, 1])
    total, seen = 0.0, 0
    for start in range(0, data.shape[0], cfg.batch_size):
        batch = data[start : start + cfg.batch_size]
        losses = tokenizer.losses(batch, augment(batch, cfg.augment, rng), track=False)
        total += losses["L_total"].item() * batch.shape[0]
        seen += batch.shape[0]
    return total / seen


def train_tokenizer(
    dataset: np.ndarray,
    cfg: Stage1Config,
    net_cfg: NetConfig = NetConfig(),
) -> tuple[Tokenizer, Codebook, TrainHistory]:
    """
    Train encoder, codebook and decoder on (S, N, T) raw patches.

    Each step encodes the batch and an augmented view, reconstructs the
    configured targets from the quantized vectors and minimizes
    reconstruction + VQ + consistency with AdamW on a warmup-cosine
    schedule. The usage histogram restarts every epoch, so `unused_codes`
    counts codes no training patch picked during that epoch.

    Raises:
        EmptyDataset: No segments.
    """
    data = as_dataset(dataset, net_cfg.patch_T, net_cfg.seq_N)
    rng = np.random.default_rng(cfg.seed)
    train_idx, val_idx = _split(data.shape[0], cfg.val_fraction, rng)
    tokenizer = Tokenizer(net_cfg, rng, cfg.recon_objective)
    if cfg.init_codebook_from_data:
        tokenizer.codebook.initialize_from(tokenizer.latents(data[train_idx]), rng)
    optimizer = AdamW(
        tokenizer.parameters(),
        lr=cfg.peak_lr,
        betas=cfg.betas,
        weight_decay=cfg.weight_decay,
        grad_clip=cfg.grad_clip,
    )
    steps_per_epoch = n_batches(train_idx.size, cfg.batch_size)
    total_steps = cfg.epochs * steps_per_epoch
    history = TrainHistory(stage="tokenizer")
    step = 0
    for epoch in range(1, cfg.epochs + 1):
        tokenizer.codebook.reset_usage()
        sums = dict.fromkeys(("L_total", "L_spec", "L_vq", "L_con"), 0.0)
        lr = cfg.peak_lr
        for idx in batch_indices(train_idx, cfg.batch_size, rng):
            batch = data[idx]
            losses = tokenizer.losses(batch, augment(batch, cfg.augment, rng))
            tokenizer.zero_grad()
            backward(losses["L_total"])
            lr = cosine_schedule(step, total_steps, cfg.warmup_epochs * steps_per_epoch, cfg.peak_lr, cfg.min_lr)
            optimizer.step(lr)
            step += 1
            for name in sums:
                sums[name] += losses[name].item() * idx.size
        metrics = {name: value / train_idx.size for name, value in sums.items()}
        if val_idx.size:
            metrics["val_L_total"] = _validation_loss(tokenizer, data[val_idx], cfg, epoch)
        history.append(epoch, **metrics, unused_codes=tokenizer.codebook.unused_codes(), lr=lr)
        logger.info(
            "tokenizer epoch %d/%d: L_total=%.5f L_spec=%.5f unused=%d",
            epoch,
            cfg.epochs,
            metrics["L_total"],
            metrics["L_spec"],
            tokenizer.codebook.unused_codes(),
        )
    return tokenizer, tokenizer.codebook, history
