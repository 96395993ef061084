"""
Statistical prior scores of signal patches.

Every function works along the last axis, so a (B, N) batch of patch
deviations or a (B, N, T) batch of patches is scored in one call.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy import special, stats

from domain.dsp.definitions import PatchSequence

from .definitions import PriorConfig, PriorScores
from .errors import ShapeError

logger = logging.getLogger(__name__)

ZERO_VARIANCE = 1e-12


def relative_stability(sigmas: np.ndarray, cfg: PriorConfig = PriorConfig()) -> tuple[np.ndarray, np.ndarray]:
    """
    Modified z-score of each patch deviation against the segment median.

    Args:
        sigmas: Patch standard deviations, (..., N) with N >= 1.
        cfg: Score constants.

    Returns:
        (q, S_rel) where q = 0.6745 (sigma - median) / max(MAD, floor) and
        S_rel = exp(-0.2 q^2).
    """
    sigmas = np.asarray(sigmas, dtype=np.float64)
    if sigmas.shape[-1] < 1:
        raise ShapeError("relative_stability needs at least one patch")
    median = np.median(sigmas, axis=-1, keepdims=True)
    mad = np.median(np.abs(sigmas - median), axis=-1, keepdims=True)
    q = cfg.mad_const * (sigmas - median) / np.maximum(mad, cfg.mad_floor)
    return q, np.exp(-cfg.rel_coeff * q * q)


def absolute_validity(sigma: np.ndarray | float, cfg: PriorConfig = PriorConfig()) -> np.ndarray:
    """Product of a rising gate at sigma_min and a falling gate at sigma_max."""
    sigma = np.asarray(sigma, dtype=np.float64)
    lower = special.expit(cfg.k_rise * (sigma - cfg.sigma_min))
    upper = special.expit(-cfg.k_fall * (sigma - cfg.sigma_max))
    return lower * upper


def skewness_score(patch: np.ndarray) -> np.ndarray:
    """
    tanh(|skewness|) with population moments; zero for patches whose second
    central moment is below 1e-12.
    """
    patch = np.asarray(patch, dtype=np.float64)
    if patch.shape[-1] < 2:
        raise ShapeError(f"skewness needs at least 2 samples, got {patch.shape[-1]}")
    rows = patch.reshape(-1, patch.shape[-1])
    score = np.zeros(rows.shape[0])
    varied = np.var(rows, axis=-1) >= ZERO_VARIANCE
    if varied.any():
        score[varied] = np.tanh(np.abs(stats.skew(rows[varied], axis=-1, bias=True)))
    return score.reshape(patch.shape[:-1])


def prior_score(s_amp: np.ndarray, s_skew: np.ndarray, beta: float) -> np.ndarray:
    """
    Raises:
        ShapeError: If the two score arrays differ in shape.
    """
    s_amp = np.asarray(s_amp, dtype=np.float64)
    s_skew = np.asarray(s_skew, dtype=np.float64)
    if s_amp.shape != s_skew.shape:
        raise ShapeError(f"score shapes differ: {s_amp.shape} vs {s_skew.shape}")
    if beta == 0.0:
        return s_amp.copy()
    if beta == 1.0:
        return s_skew.copy()
    return (1.0 - beta) * s_amp + beta * s_skew


def score_segment(patches: PatchSequence | np.ndarray, cfg: PriorConfig = PriorConfig()) -> PriorScores:
    """
    Score every patch of a segment, or of a (B, N, T) batch of segments.

    S_amp is the product of the relative and absolute amplitude scores and
    S_prior mixes it with the skewness score by cfg.beta.
    """
    data = patches.patches if isinstance(patches, PatchSequence) else np.asarray(patches, dtype=np.float64)
    if data.ndim < 2 or data.shape[-2] < 1:
        raise ShapeError(f"expected (..., N, T) patches, got {data.shape}")
    sigma = np.std(data, axis=-1)
    _, s_rel = relative_stability(sigma, cfg)
    s_abs = absolute_validity(sigma, cfg)
    s_amp = s_rel * s_abs
    s_skew = skewness_score(data)
    s_prior = prior_score(s_amp, s_skew, cfg.beta)
    logger.debug("scored %s patches, mean S_prior %.4f", sigma.shape, float(s_prior.mean()))
    return PriorScores(sigma=sigma, s_rel=s_rel, s_abs=s_abs, s_amp=s_amp, s_skew=s_skew, s_prior=s_prior)
