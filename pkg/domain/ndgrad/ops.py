"""
Differentiable operations on Tensors.

Binary elementwise operations accept identical shapes or an operand whose
shape is a trailing suffix of the other's (a bias or a positional table over
a leading batch dimension). Anything else needs an explicit reshape or
broadcast_to.
"""

from __future__ import annotations

import builtins
import math
from typing import Any, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import special

from .errors import ShapeError
from .tensor import Tensor, as_tensor, record

Axis = int | tuple[int, ...] | None


def _suffix_compatible(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    if a == b:
        return True
    short, long_ = (a, b) if len(a) <= len(b) else (b, a)
    return long_[len(long_) - len(short):] == short


def _reduce_to(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Sum a broadcast gradient back down to an operand's shape."""
    if grad.shape == shape:
        return grad
    lead = grad.ndim - len(shape)
    if lead > 0:
        grad = grad.sum(axis=tuple(range(lead)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape)


def _binary_operands(a: Any, b: Any, op: str) -> tuple[Tensor, Tensor]:
    ta, tb = as_tensor(a), as_tensor(b)
    if not _suffix_compatible(ta.shape, tb.shape):
        raise ShapeError(f"{op}: incompatible shapes {ta.shape} and {tb.shape}")
    return ta, tb


def add(a: Any, b: Any) -> Tensor:
    ta, tb = _binary_operands(a, b, "add")

    def grad_fn(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return _reduce_to(g, ta.shape), _reduce_to(g, tb.shape)

    return record(ta.data + tb.data, (ta, tb), grad_fn, "add")


def sub(a: Any, b: Any) -> Tensor:
    ta, tb = _binary_operands(a, b, "sub")

    def grad_fn(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return _reduce_to(g, ta.shape), _reduce_to(-g, tb.shape)

    return record(ta.data - tb.data, (ta, tb), grad_fn, "sub")


def mul(a: Any, b: Any) -> Tensor:
    ta, tb = _binary_operands(a, b, "mul")

    def grad_fn(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return _reduce_to(g * tb.data, ta.shape), _reduce_to(g * ta.data, tb.shape)

    return record(ta.data * tb.data, (ta, tb), grad_fn, "mul")


def square(x: Tensor) -> Tensor:
    def grad_fn(g: np.ndarray) -> tuple[np.ndarray]:
        return (2.0 * x.data * g,)

    return record(x.data * x.data, (x,), grad_fn, "square")


def abs(x: Tensor) -> Tensor:
    def grad_fn(g: np.ndarray) -> tuple[np.ndarray]:
        return (np.sign(x.data) * g,)

    return record(np.abs(x.data), (x,), grad_fn, "abs")


def exp(x: Tensor) -> Tensor:
    out_data = np.exp(x.data)

    def grad_fn(g: np.ndarray) -> tuple[np.ndarray]:
        return (out_data * g,)

    return record(out_data, (x,), grad_fn, "exp")


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """
    Batched matrix product.

    `a` is (..., n, m). `b` is either (m, p), shared across the batch, or
    (..., m, p) with the same leading dimensions as `a`.
    """
    if a.ndim < 2 or b.ndim < 2:
        raise ShapeError(f"matmul needs at least 2-D operands, got {a.shape} @ {b.shape}")
    if a.shape[-1] != b.shape[-2]:
        raise ShapeError(f"matmul: inner dimensions differ in {a.shape} @ {b.shape}")
    if b.ndim > 2 and a.shape[:-2] != b.shape[:-2]:
        raise ShapeError(f"matmul: batch dimensions differ in {a.shape} @ {b.shape}")

    def grad_fn(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        grad_a = np.matmul(g, np.swapaxes(b.data, -1, -2))
        if b.ndim == 2:
            a2 = a.data.reshape(-1, a.shape[-1])
            g2 = g.reshape(-1, g.shape[-1])
            grad_b = a2.T @ g2
        else:
            grad_b = np.matmul(np.swapaxes(a.data, -1, -2), g)
        return grad_a, grad_b

    return record(np.matmul(a.data, b.data), (a, b), grad_fn, "matmul")


def reshape(x: Tensor, shape: tuple[int, ...]) -> Tensor:
    try:
        out_data = x.data.reshape(shape)
    except ValueError as exc:
        raise ShapeError(f"cannot reshape {x.shape} to {shape}") from exc

    def grad_fn(g: np.ndarray) -> tuple[np.ndarray]:
        return (g.reshape(x.shape),)

    return record(out_data, (x,), grad_fn, "reshape")


def transpose(x: Tensor, axes: tuple[int, ...]) -> Tensor:
    if sorted(axes) != list(range(x.ndim)):
        raise ShapeError(f"invalid permutation {axes} for {x.ndim}-D tensor")
    inverse = tuple(np.argsort(axes))

    def grad_fn(g: np.ndarray) -> tuple[np.ndarray]:
        return (np.transpose(g, inverse),)

    return record(np.transpose(x.data, axes), (x,), grad_fn, "transpose")


def broadcast_to(x: Tensor, shape: tuple[int, ...]) -> Tensor:
    try:
        out_data = np.broadcast_to(x.data, shape).copy()
    except ValueError as exc:
        raise ShapeError(f"cannot broadcast {x.shape} to {shape}") from exc

    def grad_fn(g: np.ndarray) -> tuple[np.ndarray]:
        return (_reduce_to(g, x.shape),)

    return record(out_data, (x,), grad_fn, "broadcast_to")


def concat(tensors: Sequence[Tensor], axis: int = 0) -> Tensor:
    if not tensors:
        raise ShapeError("concat needs at least one tensor")
    parts = tuple(as_tensor(t) for t in tensors)
    try:
        out_data = np.concatenate([t.data for t in parts], axis=axis)
    except ValueError as exc:
        raise ShapeError(f"concat: {exc}") from exc
    bounds = np.cumsum([t.shape[axis] for t in parts])[:-1]

    def grad_fn(g: np.ndarray) -> list[np.ndarray]:
        return list(np.split(g, bounds, axis=axis))

    return record(out_data, parts, grad_fn, "concat")


def _expand_reduced(g: np.ndarray, shape: tuple[int, ...], axis: Axis, keepdims: bool) -> np.ndarray:
    if axis is None:
        return np.broadcast_to(g, shape)
    if not keepdims:
        axes = (axis,) if isinstance(axis, int) else axis
        axes = tuple(a % len(shape) for a in axes)
        g = np.expand_dims(g, axes)
    return np.broadcast_to(g, shape)


def sum(x: Tensor, axis: Axis = None, keepdims: bool = False) -> Tensor:
    def grad_fn(g: np.ndarray) -> tuple[np.ndarray]:
        return (np.array(_expand_reduced(g, x.shape, axis, keepdims)),)

    return record(np.sum(x.data, axis=axis, keepdims=keepdims), (x,), grad_fn, "sum")


def mean(x: Tensor, axis: Axis = None, keepdims: bool = False) -> Tensor:
    if axis is None:
        count = x.size
    else:
        axes = (axis,) if isinstance(axis, int) else axis
        count = int(np.prod([x.shape[a] for a in axes]))

    def grad_fn(g: np.ndarray) -> tuple[np.ndarray]:
        return (np.array(_expand_reduced(g, x.shape, axis, keepdims)) / count,)

    return record(np.mean(x.data, axis=axis, keepdims=keepdims), (x,), grad_fn, "mean")


def relu(x: Tensor) -> Tensor:
    def grad_fn(g: np.ndarray) -> tuple[np.ndarray]:
        return (g * (x.data > 0),)

    return record(np.maximum(x.data, 0.0), (x,), grad_fn, "relu")


def gelu(x: Tensor) -> Tensor:
    """Exact (erf-based) GELU."""
    cdf = 0.5 * (1.0 + special.erf(x.data / math.sqrt(2.0)))

    def grad_fn(g: np.ndarray) -> tuple[np.ndarray]:
        pdf = np.exp(-0.5 * x.data**2) / math.sqrt(2.0 * math.pi)
        return (g * (cdf + x.data * pdf),)

    return record(x.data * cdf, (x,), grad_fn, "gelu")


def softplus(x: Tensor) -> Tensor:
    def grad_fn(g: np.ndarray) -> tuple[np.ndarray]:
        return (g * special.expit(x.data),)

    return record(np.logaddexp(0.0, x.data), (x,), grad_fn, "softplus")


def layer_norm(x: Tensor, gamma: Tensor, beta: Tensor, eps: float = 1e-5) -> Tensor:
    """Normalize over the last axis, then scale and shift."""
    if gamma.shape != (x.shape[-1],) or beta.shape != (x.shape[-1],):
        raise ShapeError(f"layer_norm: affine shapes must be ({x.shape[-1]},)")
    mu = x.data.mean(axis=-1, keepdims=True)
    var = x.data.var(axis=-1, keepdims=True)
    inv_std = 1.0 / np.sqrt(var + eps)
    xhat = (x.data - mu) * inv_std

    def grad_fn(g: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        dxhat = g * gamma.data
        grad_x = inv_std * (
            dxhat
            - dxhat.mean(axis=-1, keepdims=True)
            - xhat * (dxhat * xhat).mean(axis=-1, keepdims=True)
        )
        lead = tuple(range(x.ndim - 1))
        return grad_x, (g * xhat).sum(axis=lead), g.sum(axis=lead)

    return record(xhat * gamma.data + beta.data, (x, gamma, beta), grad_fn, "layer_norm")


def _softmax(data: np.ndarray, axis: int) -> np.ndarray:
    shifted = data - data.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=axis, keepdims=True)


def softmax(x: Tensor, axis: int = -1) -> Tensor:
    s = _softmax(x.data, axis)

    def grad_fn(g: np.ndarray) -> tuple[np.ndarray]:
        return (s * (g - (g * s).sum(axis=axis, keepdims=True)),)

    return record(s, (x,), grad_fn, "softmax")


def log_softmax(x: Tensor, axis: int = -1) -> Tensor:
    out_data = x.data - special.logsumexp(x.data, axis=axis, keepdims=True)

    def grad_fn(g: np.ndarray) -> tuple[np.ndarray]:
        return (g - np.exp(out_data) * g.sum(axis=axis, keepdims=True),)

    return record(out_data, (x,), grad_fn, "log_softmax")


def cross_entropy(logits: Tensor, targets: np.ndarray) -> Tensor:
    """
    Per-position negative log-likelihood of integer targets.

    Args:
        logits: (..., K) unnormalized scores.
        targets: Integer array with the leading shape of `logits`.

    Returns:
        Tensor of shape `targets.shape`.
    """
    targets = np.asarray(targets)
    if targets.shape != logits.shape[:-1]:
        raise ShapeError(
            f"cross_entropy: targets {targets.shape} do not match logits {logits.shape}"
        )
    n_classes = logits.shape[-1]
    if targets.size and (targets.min() < 0 or targets.max() >= n_classes):
        raise ShapeError(f"cross_entropy: targets outside [0, {n_classes})")
    log_probs = logits.data - special.logsumexp(logits.data, axis=-1, keepdims=True)
    picked = np.take_along_axis(log_probs, targets[..., None], axis=-1)[..., 0]

    def grad_fn(g: np.ndarray) -> tuple[np.ndarray]:
        grad = np.exp(log_probs)
        np.put_along_axis(
            grad,
            targets[..., None],
            np.take_along_axis(grad, targets[..., None], axis=-1) - 1.0,
            axis=-1,
        )
        return (grad * g[..., None],)

    return record(-picked, (logits,), grad_fn, "cross_entropy")


def embedding_lookup(table: Tensor, ids: np.ndarray) -> Tensor:
    ids = np.asarray(ids, dtype=np.int64)
    if ids.size and (ids.min() < 0 or ids.max() >= table.shape[0]):
        raise ShapeError(f"embedding_lookup: ids outside [0, {table.shape[0]})")

    def grad_fn(g: np.ndarray) -> tuple[np.ndarray]:
        grad = np.zeros_like(table.data)
        np.add.at(grad, ids.reshape(-1), g.reshape(-1, table.shape[-1]))
        return (grad,)

    return record(table.data[ids], (table,), grad_fn, "embedding_lookup")


def conv1d(
    x: Tensor,
    weight: Tensor,
    bias: Tensor | None = None,
    stride: int = 1,
    padding: int = 0,
) -> Tensor:
    """
    One-dimensional cross-correlation.

    Args:
        x: (B, C_in, L) input.
        weight: (C_out, C_in, K) kernels.
        bias: Optional (C_out,) offsets.
        stride: Step between windows.
        padding: Zeros added on both ends.

    Returns:
        (B, C_out, L_out) with L_out = (L + 2*padding - K) // stride + 1.
    """
    if x.ndim != 3 or weight.ndim != 3 or x.shape[1] != weight.shape[1]:
        raise ShapeError(f"conv1d: input {x.shape} does not match kernels {weight.shape}")
    kernel = weight.shape[2]
    length = x.shape[2]
    if length + 2 * padding < kernel:
        raise ShapeError(f"conv1d: input length {length} shorter than kernel {kernel}")
    padded = np.pad(x.data, ((0, 0), (0, 0), (padding, padding)))
    windows = sliding_window_view(padded, kernel, axis=2)[:, :, ::stride, :]
    out_data = np.einsum("bclk,ock->bol", windows, weight.data)
    if bias is not None:
        out_data = out_data + bias.data[None, :, None]
    n_out = windows.shape[2]
    parents: tuple[Tensor, ...] = (x, weight) if bias is None else (x, weight, bias)

    def grad_fn(g: np.ndarray) -> list[np.ndarray]:
        grad_w = np.einsum("bol,bclk->ock", g, windows)
        grad_windows = np.einsum("bol,ock->bclk", g, weight.data)
        grad_padded = np.zeros_like(padded)
        positions = np.arange(n_out) * stride
        for k in range(kernel):
            grad_padded[:, :, positions + k] += grad_windows[:, :, :, k]
        grad_x = grad_padded[:, :, padding : padding + length]
        grads = [grad_x, grad_w]
        if bias is not None:
            grads.append(g.sum(axis=(0, 2)))
        return grads

    return record(out_data, parents, grad_fn, "conv1d")


def stop_gradient(x: Tensor) -> Tensor:
    """Same values, no gradient path."""
    return Tensor(x.data.copy())


def straight_through(forward_value: Any, backward_carrier: Tensor) -> Tensor:
    """
    Output `forward_value` but send the incoming gradient, unchanged, to
    `backward_carrier`.
    """
    value = as_tensor(forward_value)
    if value.shape != backward_carrier.shape:
        raise ShapeError(
            f"straight_through: value {value.shape} and carrier {backward_carrier.shape} differ"
        )

    def grad_fn(g: np.ndarray) -> tuple[np.ndarray]:
        return (g,)

    return record(value.data.copy(), (backward_carrier,), grad_fn, "straight_through")


def global_norm(grads: Sequence[np.ndarray]) -> float:
    return math.sqrt(builtins.sum(float(np.sum(g * g)) for g in grads))
