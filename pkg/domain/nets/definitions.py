from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Any

from .errors import NetConfigError


@dataclass(frozen=True)
class NetConfig:
    """
    Dimensions of every network.

    Defaults are desk scale. The conv stack is applied to each patch on its
    own; the tokenizer shares it with nothing. Teacher dimensions are
    separate because the teacher stays small whatever the student size.
    """

    conv_channels: tuple[int, ...] = (1, 8, 8, 8)
    conv_kernels: tuple[int, ...] = (15, 3, 3)
    conv_strides: tuple[int, ...] = (8, 1, 1)
    conv_paddings: tuple[int, ...] = (7, 1, 1)
    n_encoder_layers: int = 2
    n_decoder_layers: int = 1
    hidden: int = 64
    mlp: int = 128
    heads: int = 4
    codebook_K: int = 64
    codebook_D: int = 16
    patch_T: int = 50
    seq_N: int = 240
    student_layers: int = 2
    teacher_hidden: int = 64
    teacher_layers: int = 2
    teacher_heads: int = 4
    teacher_mlp: int = 128
    layer_scale: float = 1.0
    tie_embeddings: bool = False
    init_std: float = 0.02

    def __post_init__(self) -> None:
        for name in ("conv_channels", "conv_kernels", "conv_strides", "conv_paddings"):
            object.__setattr__(self, name, tuple(int(v) for v in getattr(self, name)))
        n_conv = len(self.conv_kernels)
        lengths = (len(self.conv_channels) - 1, len(self.conv_strides), len(self.conv_paddings))
        if any(length != n_conv for length in lengths):
            raise NetConfigError("conv_channels needs one more entry than kernels, strides and paddings")
        if n_conv and self.conv_channels[0] != 1:
            raise NetConfigError("the conv stack reads single-channel patches")
        if self.hidden % self.heads:
            raise NetConfigError(f"hidden {self.hidden} is not divisible by heads {self.heads}")
        if self.teacher_hidden % self.teacher_heads:
            raise NetConfigError(f"teacher_hidden {self.teacher_hidden} is not divisible by {self.teacher_heads}")
        if self.codebook_K < 2:
            raise NetConfigError("codebook_K must be at least 2")
        if min(self.codebook_D, self.patch_T, self.seq_N, self.mlp, self.teacher_mlp) < 1:
            raise NetConfigError("dimensions must be positive")
        if self.patch_T < 2:
            raise NetConfigError("patch_T must be at least 2")
        if self.conv_out_len() < 1:
            raise NetConfigError(f"conv stack leaves no samples of a {self.patch_T}-sample patch")
        if self.layer_scale <= 0:
            raise NetConfigError("layer_scale must be positive")

    def conv_out_len(self) -> int:
        length = self.patch_T
        for kernel, stride, padding in zip(self.conv_kernels, self.conv_strides, self.conv_paddings):
            length = (length + 2 * padding - kernel) // stride + 1
        return length

    @property
    def spectrum_len(self) -> int:
        return self.patch_T // 2 + 1

    def with_overrides(self, **overrides: Any) -> NetConfig:
        return replace(self, **overrides)

    @classmethod
    def field_names(cls) -> set[str]:
        return {f.name for f in fields(cls)}


LARGE_BASE = NetConfig(
    n_encoder_layers=12,
    n_decoder_layers=3,
    hidden=200,
    mlp=800,
    heads=10,
    codebook_K=4096,
    codebook_D=64,
    student_layers=12,
)
