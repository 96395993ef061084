"""
Central finite-difference checks of tape gradients.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .tensor import Tensor, backward

logger = logging.getLogger(__name__)

ABS_FLOOR = 1e-7
REL_TOLERANCE = 1e-4


@dataclass
class GradCheckResult:
    name: str
    max_abs_error: float
    max_rel_error: float
    per_input: list[float] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.max_abs_error <= ABS_FLOOR or self.max_rel_error < REL_TOLERANCE


def numerical_gradient(fn: Callable[[], Tensor], x: Tensor, h: float = 1e-5) -> np.ndarray:
    """Central differences of the scalar fn() with respect to every entry of x."""
    grad = np.zeros_like(x.data)
    flat = x.data.reshape(-1)
    out = grad.reshape(-1)
    for i in range(flat.size):
        original = flat[i]
        flat[i] = original + h
        plus = fn().item()
        flat[i] = original - h
        minus = fn().item()
        flat[i] = original
        out[i] = (plus - minus) / (2.0 * h)
    return grad


def check_gradients(
    fn: Callable[[], Tensor],
    inputs: Sequence[Tensor],
    h: float = 1e-5,
    name: str = "fn",
) -> GradCheckResult:
    """
    Compare tape gradients of a scalar function with central differences.

    `fn` must rebuild its graph from the current values of `inputs` on every
    call. The relative error of an input is max|analytic - numeric| divided
    by max(max|analytic|, max|numeric|); entries whose absolute error is under
    the floor count as passing.

    Returns:
        GradCheckResult with the worst errors over all inputs.
    """
    for x in inputs:
        x.grad = None
    backward(fn(), inputs)
    analytic = [np.array(x.grad) for x in inputs]
    max_abs = 0.0
    max_rel = 0.0
    per_input = []
    for x, tape_grad in zip(inputs, analytic):
        numeric = numerical_gradient(fn, x, h)
        abs_err = float(np.max(np.abs(tape_grad - numeric))) if numeric.size else 0.0
        scale = max(float(np.max(np.abs(tape_grad), initial=0.0)), float(np.max(np.abs(numeric), initial=0.0)))
        rel_err = 0.0 if abs_err <= ABS_FLOOR else abs_err / max(scale, 1e-300)
        per_input.append(rel_err)
        max_abs = max(max_abs, abs_err)
        max_rel = max(max_rel, rel_err)
    result = GradCheckResult(name=name, max_abs_error=max_abs, max_rel_error=max_rel, per_input=per_input)
    logger.debug("gradcheck %s: abs %.3e rel %.3e", name, max_abs, max_rel)
    return result


def _leaf(rng: np.random.Generator, *shape: int) -> Tensor:
    return Tensor(rng.uniform(-1.0, 1.0, size=shape), requires_grad=True)


def op_suite(seed: int = 0) -> list[GradCheckResult]:
    """Gradient-check every differentiable op on small random inputs in [-1, 1]."""
    from . import ops

    rng = np.random.default_rng(seed)
    a, b = _leaf(rng, 3, 4), _leaf(rng, 3, 4)
    bias = _leaf(rng, 4)
    m1, m2 = _leaf(rng, 2, 3, 4), _leaf(rng, 4, 5)
    bm = _leaf(rng, 2, 4, 2)
    gamma, beta = _leaf(rng, 4), _leaf(rng, 4)
    table = _leaf(rng, 5, 3)
    ids = np.array([[0, 2, 2], [4, 1, 0]])
    targets = np.array([1, 3, 0])
    cx, cw, cb = _leaf(rng, 2, 2, 9), _leaf(rng, 3, 2, 3), _leaf(rng, 3)
    # fixed random projections turn every output into a scalar
    projections: dict[tuple[int, ...], np.ndarray] = {}

    def weighted(t: Tensor) -> Tensor:
        if t.shape not in projections:
            projections[t.shape] = rng.uniform(-1.0, 1.0, size=t.shape)
        return ops.sum(ops.mul(t, Tensor(projections[t.shape])))

    cases: list[tuple[str, Callable[[], Tensor], list[Tensor]]] = [
        ("add", lambda: weighted(ops.add(a, bias)), [a, bias]),
        ("sub", lambda: weighted(ops.sub(a, b)), [a, b]),
        ("mul", lambda: weighted(ops.mul(a, b)), [a, b]),
        ("square", lambda: weighted(ops.square(a)), [a]),
        ("exp", lambda: weighted(ops.exp(a)), [a]),
        ("abs", lambda: weighted(ops.abs(a)), [a]),
        ("matmul", lambda: weighted(ops.matmul(m1, m2)), [m1, m2]),
        ("matmul_batched", lambda: weighted(ops.matmul(m1, bm)), [m1, bm]),
        ("reshape", lambda: weighted(ops.reshape(a, (2, 6))), [a]),
        ("transpose", lambda: weighted(ops.transpose(m1, (0, 2, 1))), [m1]),
        ("broadcast_to", lambda: weighted(ops.broadcast_to(bias, (3, 4))), [bias]),
        ("concat", lambda: weighted(ops.concat([a, b], axis=1)), [a, b]),
        ("sum", lambda: weighted(ops.sum(m1, axis=1)), [m1]),
        ("mean", lambda: weighted(ops.mean(m1, axis=(0, 2), keepdims=True)), [m1]),
        ("relu", lambda: weighted(ops.relu(a)), [a]),
        ("gelu", lambda: weighted(ops.gelu(a)), [a]),
        ("softplus", lambda: weighted(ops.softplus(a)), [a]),
        ("layer_norm", lambda: weighted(ops.layer_norm(a, gamma, beta)), [a, gamma, beta]),
        ("softmax", lambda: weighted(ops.softmax(a, axis=-1)), [a]),
        ("softmax_axis0", lambda: weighted(ops.softmax(a, axis=0)), [a]),
        ("log_softmax", lambda: weighted(ops.log_softmax(a, axis=-1)), [a]),
        ("cross_entropy", lambda: weighted(ops.cross_entropy(a, targets)), [a]),
        ("embedding_lookup", lambda: weighted(ops.embedding_lookup(table, ids)), [table]),
        ("conv1d", lambda: weighted(ops.conv1d(cx, cw, cb, stride=2, padding=1)), [cx, cw, cb]),
        ("straight_through", lambda: weighted(ops.straight_through(a.data, a)), [a]),
        ("stop_gradient", lambda: weighted(ops.add(ops.mul(a, b), ops.stop_gradient(ops.exp(b)))), [a]),
    ]
    return [check_gradients(fn, inputs, name=name) for name, fn, inputs in cases]
