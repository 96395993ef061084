"""
Synthetic pulse waveforms with configurable artifacts.

Each beat is a systolic Gaussian plus a smaller, later dicrotic Gaussian.
Heart rate is fixed per record, so a record without wander, noise or
artifacts repeats exactly every beat period.
"""

from __future__ import annotations

import logging

import numpy as np

from .definitions import RawRecord, Span, SynthConfig

logger = logging.getLogger(__name__)

SYSTOLIC_CENTER = 0.2
SYSTOLIC_WIDTH = 0.07
DICROTIC_CENTER = 0.45
DICROTIC_WIDTH = 0.09


def pulse_train(t: np.ndarray, period_s: float, dicrotic_amplitude: float) -> np.ndarray:
    """Periodic two-Gaussian pulse shape sampled at times t."""
    phase = np.mod(t, period_s) / period_s
    wave = np.zeros_like(t)
    # neighbouring beats contribute their tails
    for shift in (-1.0, 0.0, 1.0):
        x = phase - shift
        wave += np.exp(-0.5 * ((x - SYSTOLIC_CENTER) / SYSTOLIC_WIDTH) ** 2)
        wave += dicrotic_amplitude * np.exp(-0.5 * ((x - DICROTIC_CENTER) / DICROTIC_WIDTH) ** 2)
    return wave


def _span_slice(span: Span, sample_rate_hz: float, n: int) -> slice:
    start = int(round(span[0] * sample_rate_hz))
    stop = min(int(round(span[1] * sample_rate_hz)), n)
    return slice(start, stop)


def synth_ppg(config: SynthConfig, index: int = 0) -> RawRecord:
    """
    Generate one record. Deterministic in (config.seed, index).

    Args:
        config: Waveform and artifact parameters.
        index: Record number; each index draws from its own stream.

    Returns:
        RawRecord at config.sample_rate_hz with NaN over missing spans.
    """
    rng = np.random.default_rng([config.seed, index])
    n = int(round(config.duration_s * config.sample_rate_hz))
    t = np.arange(n) / config.sample_rate_hz
    bpm = rng.uniform(*config.heart_rate_bpm)
    period = 60.0 / bpm
    onset = rng.uniform(0.0, period)
    wander_phase = rng.uniform(0.0, 2.0 * np.pi)

    samples = pulse_train(t + onset, period, config.dicrotic_amplitude)
    if config.wander_amplitude:
        samples += config.wander_amplitude * np.sin(2.0 * np.pi * config.wander_hz * t + wander_phase)
    if config.noise_sigma:
        samples += rng.normal(0.0, config.noise_sigma, size=n)
    for span in config.spike_spans:
        window = _span_slice(span, config.sample_rate_hz, n)
        samples[window] += config.spike_amplitude * rng.standard_normal(samples[window].size)
    for span in config.flatline_spans:
        window = _span_slice(span, config.sample_rate_hz, n)
        if window.start < n:
            samples[window] = samples[window.start]
    for span in config.missing_spans:
        samples[_span_slice(span, config.sample_rate_hz, n)] = np.nan
    logger.debug("synthesized record %d: %d samples, %.1f bpm", index, n, bpm)
    return RawRecord(config.sample_rate_hz, samples)
