"""
Building blocks shared by the tokenizer, student and teacher.

Inputs are (B, N, H) token sequences unless stated otherwise.
"""

from __future__ import annotations

import math

import numpy as np

from domain.ndgrad import ops
from domain.ndgrad.module import Module, parameter, trunc_normal
from domain.ndgrad.tensor import Tensor

from .errors import ShapeError


class Linear(Module):
    def __init__(self, n_in: int, n_out: int, rng: np.random.Generator, std: float = 0.02) -> None:
        self.weight = parameter(trunc_normal(rng, (n_in, n_out), std))
        self.bias = parameter(np.zeros(n_out))

    def __call__(self, x: Tensor) -> Tensor:
        return ops.add(ops.matmul(x, self.weight), self.bias)


class LayerNorm(Module):
    def __init__(self, dim: int) -> None:
        self.gamma = parameter(np.ones(dim))
        self.beta = parameter(np.zeros(dim))

    def __call__(self, x: Tensor) -> Tensor:
        return ops.layer_norm(x, self.gamma, self.beta)


class Embedding(Module):
    def __init__(self, n_rows: int, dim: int, rng: np.random.Generator, std: float = 0.02) -> None:
        self.table = parameter(trunc_normal(rng, (n_rows, dim), std))

    def __call__(self, ids: np.ndarray) -> Tensor:
        return ops.embedding_lookup(self.table, ids)


class PositionalEmbedding(Embedding):
    """Learned absolute positions; sequences may be shorter than the table."""

    def __call__(self, x: Tensor) -> Tensor:  # type: ignore[override]
        n = x.shape[-2]
        if n > self.table.shape[0]:
            raise ShapeError(f"sequence of {n} exceeds {self.table.shape[0]} positions")
        return ops.add(x, ops.embedding_lookup(self.table, np.arange(n)))


class MultiHeadAttention(Module):
    def __init__(self, hidden: int, heads: int, rng: np.random.Generator, std: float = 0.02) -> None:
        self.heads = heads
        self.head_dim = hidden // heads
        self.query = Linear(hidden, hidden, rng, std)
        self.key = Linear(hidden, hidden, rng, std)
        self.value = Linear(hidden, hidden, rng, std)
        self.out = Linear(hidden, hidden, rng, std)

    def _split(self, x: Tensor) -> Tensor:
        batch, n, _ = x.shape
        return ops.transpose(ops.reshape(x, (batch, n, self.heads, self.head_dim)), (0, 2, 1, 3))

    def __call__(self, x: Tensor) -> Tensor:
        batch, n, hidden = x.shape
        q = self._split(self.query(x))
        k = self._split(self.key(x))
        v = self._split(self.value(x))
        scores = ops.mul(ops.matmul(q, ops.transpose(k, (0, 1, 3, 2))), 1.0 / math.sqrt(self.head_dim))
        context = ops.matmul(ops.softmax(scores, axis=-1), v)
        merged = ops.reshape(ops.transpose(context, (0, 2, 1, 3)), (batch, n, hidden))
        return self.out(merged)


class FeedForward(Module):
    def __init__(self, hidden: int, mlp: int, rng: np.random.Generator, std: float = 0.02) -> None:
        self.up = Linear(hidden, mlp, rng, std)
        self.down = Linear(mlp, hidden, rng, std)

    def __call__(self, x: Tensor) -> Tensor:
        return self.down(ops.gelu(self.up(x)))


class TransformerBlock(Module):
    """Pre-norm block; layer_scale multiplies both residual branches."""

    def __init__(
        self,
        hidden: int,
        heads: int,
        mlp: int,
        rng: np.random.Generator,
        layer_scale: float = 1.0,
        std: float = 0.02,
    ) -> None:
        self.norm1 = LayerNorm(hidden)
        self.attention = MultiHeadAttention(hidden, heads, rng, std)
        self.norm2 = LayerNorm(hidden)
        self.feed_forward = FeedForward(hidden, mlp, rng, std)
        self.layer_scale = layer_scale

    def _branch(self, x: Tensor) -> Tensor:
        return x if self.layer_scale == 1.0 else ops.mul(x, self.layer_scale)

    def __call__(self, x: Tensor) -> Tensor:
        x = ops.add(x, self._branch(self.attention(self.norm1(x))))
        return ops.add(x, self._branch(self.feed_forward(self.norm2(x))))


class TransformerStack(Module):
    def __init__(
        self,
        n_layers: int,
        hidden: int,
        heads: int,
        mlp: int,
        rng: np.random.Generator,
        layer_scale: float = 1.0,
        std: float = 0.02,
    ) -> None:
        self.blocks = [TransformerBlock(hidden, heads, mlp, rng, layer_scale, std) for _ in range(n_layers)]
        self.norm = LayerNorm(hidden)

    def __call__(self, x: Tensor) -> Tensor:
        for block in self.blocks:
            x = block(x)
        return self.norm(x)


class Conv1d(Module):
    def __init__(
        self,
        c_in: int,
        c_out: int,
        kernel: int,
        stride: int,
        padding: int,
        rng: np.random.Generator,
        std: float = 0.02,
    ) -> None:
        self.weight = parameter(trunc_normal(rng, (c_out, c_in, kernel), std))
        self.bias = parameter(np.zeros(c_out))
        self.stride = stride
        self.padding = padding

    def __call__(self, x: Tensor) -> Tensor:
        return ops.conv1d(x, self.weight, self.bias, stride=self.stride, padding=self.padding)


class PatchConvEmbed(Module):
    """
    Temporal conv stack run on every patch separately, flattened and
    projected to the model width: (B, N, T) patches to (B, N, hidden).
    """

    def __init__(
        self,
        channels: tuple[int, ...],
        kernels: tuple[int, ...],
        strides: tuple[int, ...],
        paddings: tuple[int, ...],
        patch_T: int,
        out_len: int,
        hidden: int,
        rng: np.random.Generator,
        std: float = 0.02,
    ) -> None:
        self.convs = [
            Conv1d(channels[i], channels[i + 1], kernels[i], strides[i], paddings[i], rng, std)
            for i in range(len(kernels))
        ]
        self.patch_T = patch_T
        self.proj = Linear(channels[-1] * out_len, hidden, rng, std)

    def __call__(self, patches: Tensor) -> Tensor:
        if patches.ndim != 3 or patches.shape[-1] != self.patch_T:
            raise ShapeError(f"expected (B, N, {self.patch_T}) patches, got {patches.shape}")
        batch, n, length = patches.shape
        x = ops.reshape(patches, (batch * n, 1, length))
        for conv in self.convs:
            x = ops.gelu(conv(x))
        flat = ops.reshape(x, (batch, n, x.shape[1] * x.shape[2]))
        return self.proj(flat)
