"""
The masking teacher's policy: prior-biased logits, the Plackett-Luce
likelihood of a selection order and the score-function objective.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy import special, stats

from domain.ndgrad import ops
from domain.ndgrad.tensor import Tensor, as_tensor

from .definitions import PolicyMetrics
from .errors import InvalidOrder, NotADistribution, ShapeError

logger = logging.getLogger(__name__)

# logit assigned to already-selected positions; exp() of it underflows to 0
EXCLUDED = -1e30
PROB_TOLERANCE = 1e-6


def prior_bias(s_prior: np.ndarray, std_floor: float = 1e-9) -> np.ndarray:
    """Standardize prior scores along the last axis with a floored population std."""
    s_prior = np.asarray(s_prior, dtype=np.float64)
    if s_prior.shape[-1] < 1:
        raise ShapeError("prior_bias needs at least one score")
    centred = s_prior - s_prior.mean(axis=-1, keepdims=True)
    scale = np.maximum(s_prior.std(axis=-1, keepdims=True), std_floor)
    return centred / scale


def final_logits(teacher_logits: Tensor | np.ndarray, bias: np.ndarray, alpha: float) -> Tensor | np.ndarray:
    """teacher_logits + alpha * bias; stays on the tape when given a Tensor."""
    bias = np.asarray(bias, dtype=np.float64)
    if teacher_logits.shape != bias.shape:
        raise ShapeError(f"final_logits: logits {teacher_logits.shape} and bias {bias.shape} differ")
    if isinstance(teacher_logits, Tensor):
        return ops.add(teacher_logits, alpha * bias)
    return np.asarray(teacher_logits, dtype=np.float64) + alpha * bias


def _check_order(order: np.ndarray, n: int) -> np.ndarray:
    order = np.asarray(order)
    if not np.issubdtype(order.dtype, np.integer):
        raise InvalidOrder(f"selection order must hold integers, got {order.dtype}")
    if order.shape[-1] < 1:
        raise InvalidOrder("selection order is empty")
    if order.min() < 0 or order.max() >= n:
        raise InvalidOrder(f"selection order leaves [0, {n})")
    ranked = np.sort(order, axis=-1)
    if np.any(ranked[..., 1:] == ranked[..., :-1]):
        raise InvalidOrder("selection order repeats an index")
    return order.astype(np.int64)


def _exclusion_penalty(order: np.ndarray, n: int) -> np.ndarray:
    """(..., k, N) additive mask: step j excludes everything picked before it."""
    k = order.shape[-1]
    penalty = np.zeros(order.shape[:-1] + (k, n))
    for j in range(1, k):
        np.put_along_axis(penalty[..., j, :], order[..., :j], EXCLUDED, axis=-1)
    return penalty


def log_prob(logits: Tensor | np.ndarray, order: np.ndarray) -> Tensor:
    """
    Plackett-Luce log-probability of drawing `order` without replacement.

    Each step contributes logits[i_j] minus the logsumexp of the logits not
    selected before step j.

    Args:
        logits: (..., N) scores.
        order: (..., k) integer indices in draw order.

    Returns:
        Tensor of shape (...), differentiable with respect to `logits`.

    Raises:
        InvalidOrder: Repeated or out-of-range indices.
        ShapeError: Leading shapes of logits and order differ.
    """
    logits = as_tensor(logits)
    order = np.asarray(order)
    if order.shape[:-1] != logits.shape[:-1]:
        raise ShapeError(f"log_prob: order {order.shape} does not match logits {logits.shape}")
    n = logits.shape[-1]
    order = _check_order(order, n)
    lead, k = logits.shape[:-1], order.shape[-1]
    tiled = ops.broadcast_to(ops.reshape(logits, lead + (1, n)), lead + (k, n))
    nll = ops.cross_entropy(ops.add(tiled, _exclusion_penalty(order, n)), order)
    return ops.mul(ops.sum(nll, axis=-1), -1.0)


def sequence_log_prob(logits: np.ndarray, order: np.ndarray) -> float:
    """Plain-array Plackett-Luce log-probability of a single order."""
    logits = np.asarray(logits, dtype=np.float64)
    order = _check_order(np.asarray(order), logits.size)
    remaining = np.ones(logits.size, dtype=bool)
    total = 0.0
    for index in order:
        total += logits[index] - special.logsumexp(logits[remaining])
        remaining[index] = False
    return float(total)


def teacher_loss(
    rewards: Tensor | np.ndarray,
    log_probs: Tensor,
    baseline: float | None = None,
) -> Tensor:
    """
    Score-function surrogate whose minimization ascends the expected reward.

    loss = -mean_j (R_j - b) * log_prob_j with b = mean(R) unless a fixed
    baseline is given. Rewards are treated as constants.
    """
    reward = np.asarray(rewards.data if isinstance(rewards, Tensor) else rewards, dtype=np.float64)
    if reward.ndim != 1 or reward.size < 1:
        raise ShapeError(f"teacher_loss needs a non-empty (B,) reward vector, got {reward.shape}")
    if log_probs.shape != reward.shape:
        raise ShapeError(f"teacher_loss: rewards {reward.shape} and log_probs {log_probs.shape} differ")
    b = float(reward.mean()) if baseline is None else baseline
    return ops.mul(ops.mean(ops.mul(log_probs, reward - b)), -1.0)


def policy_entropy(probs: np.ndarray) -> float | np.ndarray:
    """
    Shannon entropy in nats along the last axis.

    Raises:
        NotADistribution: Negative entries or rows not summing to one.
    """
    probs = np.asarray(probs, dtype=np.float64)
    if np.any(probs < -PROB_TOLERANCE) or np.any(np.abs(probs.sum(axis=-1) - 1.0) > PROB_TOLERANCE):
        raise NotADistribution("policy probabilities must be non-negative and sum to one")
    entropy = stats.entropy(np.clip(probs, 0.0, None), axis=-1)
    return float(entropy) if np.ndim(entropy) == 0 else entropy


def policy_metrics(logits: np.ndarray, masks: np.ndarray, loss: float) -> PolicyMetrics:
    """
    Batch means of the policy entropy and the selection probability.

    The probability is the softmax of the final logits, averaged both over
    masked positions and over all positions; with nothing masked the masked
    average is None.
    """
    probs = special.softmax(np.asarray(logits, dtype=np.float64), axis=-1)
    masks = np.asarray(masks, dtype=bool)
    masked = probs[masks]
    return PolicyMetrics(
        entropy=float(np.mean(policy_entropy(probs))),
        mean_prob_masked=float(masked.mean()) if masked.size else None,
        mean_prob_all=float(probs.mean()),
        teacher_loss=float(loss),
    )
