"""
Gumbel-Top-k sampling of masks without replacement and the deterministic
span repair applied afterwards.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Sequence

import numpy as np

from .definitions import MaskSample
from .errors import InvalidK, ShapeError
from .policy import sequence_log_prob

logger = logging.getLogger(__name__)

U_CLAMP = 1e-12
SCORE_FLOOR = 1e-9


def perturb(logits: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Add independent standard Gumbel noise to every logit."""
    logits = np.asarray(logits, dtype=np.float64)
    u = np.clip(rng.uniform(size=logits.shape), U_CLAMP, 1.0 - U_CLAMP)
    return logits - np.log(-np.log(u))


def top_k_order(perturbed: np.ndarray, k: int) -> np.ndarray:
    """Indices of the k largest values along the last axis, largest first, lowest index on ties."""
    return np.argsort(-perturbed, axis=-1, kind="stable")[..., :k]


def gumbel_topk(logits: np.ndarray, k: int, rng: np.random.Generator) -> MaskSample:
    """
    Draw k of N positions without replacement, P(order) following
    Plackett-Luce on `logits`. The returned sample is not span-repaired.

    Raises:
        InvalidK: k outside [1, N].
    """
    logits = np.asarray(logits, dtype=np.float64)
    if logits.ndim != 1:
        raise ShapeError(f"gumbel_topk samples one (N,) row at a time, got {logits.shape}")
    n = logits.size
    if not 1 <= k <= n:
        raise InvalidK(f"k={k} outside [1, {n}]")
    perturbed = perturb(logits, rng)
    order = top_k_order(perturbed, k)
    mask = np.zeros(n, dtype=bool)
    mask[order] = True
    return MaskSample(
        mask=mask,
        perturbed=perturbed,
        order=order,
        log_prob=sequence_log_prob(logits, order),
        pre_repair_mask=mask.copy(),
    )


def masked_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """[start, stop) ranges of consecutive masked positions, left to right."""
    padded = np.concatenate(([False], np.asarray(mask, dtype=bool), [False]))
    edges = np.flatnonzero(padded[1:] != padded[:-1])
    return [(int(a), int(b)) for a, b in zip(edges[::2], edges[1::2])]


def _run_through(mask: np.ndarray, index: int) -> int:
    """Length of the masked run that masking `index` would create."""
    left = index
    while left > 0 and mask[left - 1]:
        left -= 1
    right = index + 1
    while right < mask.size and mask[right]:
        right += 1
    return right - left


def span_repair(mask: np.ndarray, perturbed: np.ndarray, max_span: int, k: int) -> np.ndarray:
    """
    Enforce the span bound, then refill towards k masked positions.

    First, while some run is longer than max_span, unmask the lowest-valued
    position of the longest run (leftmost run on ties). Then, while fewer
    than k positions are masked, mask the highest-valued unmasked position
    that does not create a run longer than max_span. Stops short of k when
    no such position is left.
    """
    mask = np.array(mask, dtype=bool)
    perturbed = np.asarray(perturbed, dtype=np.float64)
    if mask.shape != perturbed.shape or mask.ndim != 1:
        raise ShapeError(f"span_repair: mask {mask.shape} and values {perturbed.shape} must be equal 1-D")

    while True:
        runs = masked_runs(mask)
        start, stop = max(runs, key=lambda run: run[1] - run[0], default=(0, 0))
        if stop - start <= max_span:
            break
        mask[start + int(np.argmin(perturbed[start:stop]))] = False

    while np.count_nonzero(mask) < k:
        candidates = np.flatnonzero(~mask)
        ranked = candidates[np.argsort(-perturbed[candidates], kind="stable")]
        chosen = next((int(i) for i in ranked if _run_through(mask, int(i)) <= max_span), None)
        if chosen is None:
            logger.debug("span repair stopped at %d of %d masked positions", np.count_nonzero(mask), k)
            break
        mask[chosen] = True
    return mask


def repair(sample: MaskSample, max_span: int) -> MaskSample:
    mask = span_repair(sample.pre_repair_mask, sample.perturbed, max_span, sample.k)
    return replace(sample, mask=mask)


def sample_mask(logits: np.ndarray, k: int, max_span: int, rng: np.random.Generator) -> MaskSample:
    return repair(gumbel_topk(logits, k, rng), max_span)


def element_rng(seed: int, *stream: int) -> np.random.Generator:
    """Generator for one batch element, independent of scheduling order."""
    return np.random.default_rng(np.random.SeedSequence([seed, *stream]))


def sample_batch(
    logits: np.ndarray,
    k: int,
    max_span: int,
    seed: int,
    stream: Sequence[int] = (),
) -> list[MaskSample]:
    """Repaired samples for each (N,) row, row j drawn from stream (seed, *stream, j)."""
    logits = np.asarray(logits, dtype=np.float64)
    return [sample_mask(row, k, max_span, element_rng(seed, *stream, j)) for j, row in enumerate(logits)]


def random_mask(n_patches: int, k: int, rng: np.random.Generator, max_span: int = 5) -> MaskSample:
    """Uniform k-subset, then span repair."""
    return sample_mask(np.zeros(n_patches), k, max_span, rng)


def static_prior_mask(s_prior: np.ndarray, k: int, rng: np.random.Generator, max_span: int = 5) -> MaskSample:
    """Inclusion driven directly by the prior scores, then span repair."""
    logits = np.log(np.maximum(np.asarray(s_prior, dtype=np.float64), SCORE_FLOOR))
    return sample_mask(logits, k, max_span, rng)
