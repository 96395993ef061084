"""
AdamW with decoupled weight decay, global-norm clipping and the warmup +
cosine learning-rate schedule.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import ShapeError
from .ops import global_norm
from .tensor import Tensor

logger = logging.getLogger(__name__)


@dataclass
class OptimState:
    """Moment accumulators and hyperparameters for one parameter group."""

    lr: float = 1e-3
    betas: tuple[float, float] = (0.9, 0.98)
    weight_decay: float = 0.0
    eps: float = 1e-8
    step: int = 0
    first_moments: dict[str, np.ndarray] = field(default_factory=dict)
    second_moments: dict[str, np.ndarray] = field(default_factory=dict)


def adamw_step(
    params: Mapping[str, Tensor],
    grads: Mapping[str, np.ndarray | None],
    state: OptimState,
) -> None:
    """
    Apply one AdamW update in place.

    Decay is decoupled: p <- p * (1 - lr * weight_decay) before the
    bias-corrected Adam step. A missing gradient counts as zero.

    Raises:
        ShapeError: If a gradient's shape differs from its parameter.
    """
    state.step += 1
    beta1, beta2 = state.betas
    correction1 = 1.0 - beta1**state.step
    correction2 = 1.0 - beta2**state.step
    for name, param in params.items():
        grad = grads.get(name)
        if grad is None:
            grad = np.zeros_like(param.data)
        if grad.shape != param.shape:
            raise ShapeError(f"gradient for {name} has shape {grad.shape}, expected {param.shape}")
        m = state.first_moments.setdefault(name, np.zeros_like(param.data))
        v = state.second_moments.setdefault(name, np.zeros_like(param.data))
        m *= beta1
        m += (1.0 - beta1) * grad
        v *= beta2
        v += (1.0 - beta2) * grad * grad
        m_hat = m / correction1
        v_hat = v / correction2
        if state.weight_decay:
            param.data *= 1.0 - state.lr * state.weight_decay
        param.data -= state.lr * m_hat / (np.sqrt(v_hat) + state.eps)


class AdamW:
    """Thin owner of an OptimState bound to a fixed set of named parameters."""

    def __init__(
        self,
        params: Mapping[str, Tensor],
        lr: float = 1e-3,
        betas: tuple[float, float] = (0.9, 0.98),
        weight_decay: float = 0.0,
        eps: float = 1e-8,
        grad_clip: float | None = None,
    ) -> None:
        self.params = dict(params)
        self.state = OptimState(lr=lr, betas=betas, weight_decay=weight_decay, eps=eps)
        self.grad_clip = grad_clip

    def zero_grad(self) -> None:
        for param in self.params.values():
            param.grad = None

    def step(self, lr: float | None = None) -> float:
        """Clip (if configured), update, and return the pre-clip gradient norm."""
        if lr is not None:
            self.state.lr = lr
        grads = {name: p.grad for name, p in self.params.items()}
        norm = clip_grad_norm(grads, self.grad_clip) if self.grad_clip else _norm(grads)
        adamw_step(self.params, grads, self.state)
        return norm


def _norm(grads: Mapping[str, np.ndarray | None]) -> float:
    return global_norm([g for g in grads.values() if g is not None])


def clip_grad_norm(grads: dict[str, np.ndarray | None], max_norm: float) -> float:
    """Rescale gradients in the mapping so their global L2 norm is at most max_norm."""
    norm = _norm(grads)
    if norm > max_norm > 0:
        scale = max_norm / (norm + 1e-12)
        for name, grad in grads.items():
            if grad is not None:
                grads[name] = grad * scale
        logger.debug("clipped gradient norm %.4f to %.4f", norm, max_norm)
    return norm


def cosine_schedule(
    step: int,
    total_steps: int,
    warmup_steps: int,
    peak_lr: float,
    min_lr: float,
) -> float:
    """
    Linear warmup from 0 to peak_lr, then cosine decay to min_lr.

    Args:
        step: Current step, 0 <= step <= total_steps.
        total_steps: Last step of the schedule.
        warmup_steps: Steps spent warming up.
        peak_lr: Learning rate reached at the end of warmup.
        min_lr: Learning rate at total_steps.
    """
    if warmup_steps > 0 and step < warmup_steps:
        return peak_lr * step / warmup_steps
    decay_steps = total_steps - warmup_steps
    if decay_steps <= 0:
        return peak_lr
    progress = min(max((step - warmup_steps) / decay_steps, 0.0), 1.0)
    return min_lr + 0.5 * (peak_lr - min_lr) * (1.0 + math.cos(math.pi * progress))
