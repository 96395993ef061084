"""
Tokenizer encoder and decoder, the masked-token student and the masking
teacher.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from domain.ndgrad import ops
from domain.ndgrad.module import Module, parameter, trunc_normal
from domain.ndgrad.tensor import Tensor, as_tensor

from .definitions import NetConfig
from .errors import NetConfigError, ShapeError, TokenRange
from .layers import Linear, PatchConvEmbed, PositionalEmbedding, TransformerStack

logger = logging.getLogger(__name__)

RECON_TARGETS = ("amplitude", "phase", "raw")


def _as_batch(patches: Tensor | np.ndarray, patch_T: int) -> Tensor:
    x = as_tensor(patches)
    if x.ndim == 2:
        x = ops.reshape(x, (1,) + x.shape)
    if x.ndim != 3 or x.shape[-1] != patch_T:
        raise ShapeError(f"expected (B, N, {patch_T}) or (N, {patch_T}) patches, got {x.shape}")
    return x


def _conv_embed(cfg: NetConfig, hidden: int, rng: np.random.Generator) -> PatchConvEmbed:
    return PatchConvEmbed(
        cfg.conv_channels,
        cfg.conv_kernels,
        cfg.conv_strides,
        cfg.conv_paddings,
        cfg.patch_T,
        cfg.conv_out_len(),
        hidden,
        rng,
        cfg.init_std,
    )


class TokenizerEncoder(Module):
    """Raw patches (B, N, T) to latents (B, N, D)."""

    def __init__(self, cfg: NetConfig, rng: np.random.Generator) -> None:
        self.cfg = cfg
        self.embed = _conv_embed(cfg, cfg.hidden, rng)
        self.positions = PositionalEmbedding(cfg.seq_N, cfg.hidden, rng, cfg.init_std)
        self.body = TransformerStack(
            cfg.n_encoder_layers, cfg.hidden, cfg.heads, cfg.mlp, rng, cfg.layer_scale, cfg.init_std
        )
        self.head = Linear(cfg.hidden, cfg.codebook_D, rng, cfg.init_std)

    def __call__(self, patches: Tensor | np.ndarray) -> Tensor:
        x = _as_batch(patches, self.cfg.patch_T)
        return self.head(self.body(self.positions(self.embed(x))))

    encode = __call__


class TokenizerDecoder(Module):
    """
    Code vectors (B, N, D) to reconstruction targets.

    The amplitude head ends in softplus so spectra are non-negative; the
    phase and raw heads are linear.
    """

    def __init__(self, cfg: NetConfig, rng: np.random.Generator, targets: Sequence[str] = ("amplitude",)) -> None:
        unknown = set(targets) - set(RECON_TARGETS)
        if unknown or not targets:
            raise NetConfigError(f"decoder targets must be drawn from {RECON_TARGETS}, got {tuple(targets)}")
        self.cfg = cfg
        self.targets = tuple(targets)
        self.proj = Linear(cfg.codebook_D, cfg.hidden, rng, cfg.init_std)
        self.positions = PositionalEmbedding(cfg.seq_N, cfg.hidden, rng, cfg.init_std)
        self.body = TransformerStack(
            cfg.n_decoder_layers, cfg.hidden, cfg.heads, cfg.mlp, rng, cfg.layer_scale, cfg.init_std
        )
        spectrum = cfg.spectrum_len
        self.amplitude_head = Linear(cfg.hidden, spectrum, rng, cfg.init_std) if "amplitude" in targets else None
        self.phase_head = Linear(cfg.hidden, spectrum, rng, cfg.init_std) if "phase" in targets else None
        self.raw_head = Linear(cfg.hidden, cfg.patch_T, rng, cfg.init_std) if "raw" in targets else None

    def __call__(self, codes: Tensor) -> dict[str, Tensor]:
        if codes.ndim != 3 or codes.shape[-1] != self.cfg.codebook_D:
            raise ShapeError(f"expected (B, N, {self.cfg.codebook_D}) codes, got {codes.shape}")
        hidden = self.body(self.positions(self.proj(codes)))
        outputs: dict[str, Tensor] = {}
        if self.amplitude_head is not None:
            outputs["amplitude"] = ops.softplus(self.amplitude_head(hidden))
        if self.phase_head is not None:
            outputs["phase"] = self.phase_head(hidden)
        if self.raw_head is not None:
            outputs["raw"] = self.raw_head(hidden)
        return outputs

    def decode(self, codes: Tensor) -> Tensor:
        """Reconstruction of the first configured target."""
        return self(codes)[self.targets[0]]


class StudentNet(Module):
    """
    Bidirectional transformer over token ids. Id K is the learned mask token.

    With tie_embeddings the token table is the frozen codebook projected to
    the model width, plus a learned mask row.
    """

    def __init__(self, cfg: NetConfig, rng: np.random.Generator) -> None:
        self.cfg = cfg
        if cfg.tie_embeddings:
            self.code_proj = Linear(cfg.codebook_D, cfg.hidden, rng, cfg.init_std)
            self.mask_token = parameter(trunc_normal(rng, (1, cfg.hidden), cfg.init_std))
        else:
            self.token_table = parameter(trunc_normal(rng, (cfg.codebook_K + 1, cfg.hidden), cfg.init_std))
        self.positions = PositionalEmbedding(cfg.seq_N, cfg.hidden, rng, cfg.init_std)
        self.body = TransformerStack(
            cfg.student_layers, cfg.hidden, cfg.heads, cfg.mlp, rng, cfg.layer_scale, cfg.init_std
        )
        self.head = Linear(cfg.hidden, cfg.codebook_K, rng, cfg.init_std)

    def _table(self, codebook: np.ndarray | None) -> Tensor:
        if not self.cfg.tie_embeddings:
            return self.token_table
        if codebook is None:
            raise NetConfigError("tied embeddings need the codebook vectors")
        codes = self.code_proj(Tensor(np.asarray(codebook, dtype=np.float64)))
        return ops.concat([codes, self.mask_token], axis=0)

    def __call__(
        self,
        token_ids: np.ndarray,
        mask: np.ndarray | None = None,
        codebook: np.ndarray | None = None,
    ) -> Tensor:
        """
        Args:
            token_ids: (B, N) or (N,) ids in [0, K).
            mask: Same shape, True where the input is replaced by the mask token.
            codebook: (K, D) code vectors, only read with tied embeddings.

        Returns:
            (B, N, K) logits.

        Raises:
            TokenRange: If an id is outside [0, K).
        """
        ids = np.asarray(token_ids)
        if ids.ndim == 1:
            ids = ids[None, :]
            mask = None if mask is None else np.asarray(mask)[None, :]
        K = self.cfg.codebook_K
        if ids.size and (ids.min() < 0 or ids.max() >= K):
            raise TokenRange(f"token ids must lie in [0, {K})")
        if mask is not None:
            mask = np.asarray(mask, dtype=bool)
            if mask.shape != ids.shape:
                raise ShapeError(f"mask {mask.shape} does not match ids {ids.shape}")
            ids = np.where(mask, K, ids)
        x = ops.embedding_lookup(self._table(codebook), ids)
        return self.head(self.body(self.positions(x)))

    forward = __call__


class TeacherNet(Module):
    """Raw patches (B, N, T) to one masking logit per patch, (B, N)."""

    def __init__(self, cfg: NetConfig, rng: np.random.Generator) -> None:
        self.cfg = cfg
        self.embed = _conv_embed(cfg, cfg.teacher_hidden, rng)
        self.positions = PositionalEmbedding(cfg.seq_N, cfg.teacher_hidden, rng, cfg.init_std)
        self.body = TransformerStack(
            cfg.teacher_layers,
            cfg.teacher_hidden,
            cfg.teacher_heads,
            cfg.teacher_mlp,
            rng,
            cfg.layer_scale,
            cfg.init_std,
        )
        self.head = Linear(cfg.teacher_hidden, 1, rng, cfg.init_std)

    def __call__(self, patches: Tensor | np.ndarray) -> Tensor:
        x = _as_batch(patches, self.cfg.patch_T)
        logits = self.head(self.body(self.positions(self.embed(x))))
        return ops.reshape(logits, logits.shape[:2])

    forward = __call__
