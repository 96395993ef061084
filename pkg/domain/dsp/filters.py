"""
Zero-phase bandpass filtering and linear-interpolation resampling.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy import signal

from .definitions import TARGET_RATE_HZ, RawRecord
from .errors import EmptyRecord, InvalidCutoff, MissingSamples

logger = logging.getLogger(__name__)

FILTER_ORDER = 2
IMPULSE_TOLERANCE = 1e-3
MAX_IMPULSE_LEN = 1 << 20


def design_bandpass(sample_rate_hz: float, low_hz: float, high_hz: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Second-order Butterworth bandpass coefficients (bilinear transform).

    Raises:
        InvalidCutoff: Unless 0 < low_hz < high_hz < sample_rate_hz / 2.
    """
    nyquist = sample_rate_hz / 2.0
    if not 0 < low_hz < high_hz < nyquist:
        raise InvalidCutoff(
            f"cutoffs ({low_hz}, {high_hz}) Hz must satisfy 0 < low < high < {nyquist} Hz"
        )
    b, a = signal.butter(FILTER_ORDER, [low_hz, high_hz], btype="bandpass", fs=sample_rate_hz)
    return b, a


def impulse_span(b: np.ndarray, a: np.ndarray, tolerance: float = IMPULSE_TOLERANCE) -> int:
    """
    Number of samples until the impulse response stays below tolerance times
    its peak magnitude for good.
    """
    n = 256
    while True:
        impulse = np.zeros(n)
        impulse[0] = 1.0
        response = np.abs(signal.lfilter(b, a, impulse))
        above = np.flatnonzero(response >= tolerance * response.max())
        span = int(above[-1]) + 1
        # a span in the first half means the tail has been observed decaying
        if 2 * span <= n or n >= MAX_IMPULSE_LEN:
            return span
        n *= 2


def bandpass_filter(record: RawRecord, low_hz: float = 0.5, high_hz: float = 8.0) -> RawRecord:
    """
    Zero-phase bandpass: the section runs forward then backward over the
    record, with odd-reflected padding of three impulse spans at each end
    (see impulse_span), capped at one sample short of the record length.

    Args:
        record: Gap-free input record.
        low_hz: Lower cutoff.
        high_hz: Upper cutoff.

    Returns:
        RawRecord: Filtered record of the same length and rate.

    Raises:
        InvalidCutoff: Cutoffs outside (0, Nyquist).
        MissingSamples: The record contains NaN.
    """
    b, a = design_bandpass(record.sample_rate_hz, low_hz, high_hz)
    if record.missing.any():
        raise MissingSamples(f"{int(record.missing.sum())} missing samples; impute before filtering")
    padlen = min(3 * impulse_span(b, a), len(record) - 1)
    filtered = signal.filtfilt(b, a, record.samples, padtype="odd", padlen=padlen)
    return RawRecord(record.sample_rate_hz, filtered)


def resample(record: RawRecord, target_hz: float = TARGET_RATE_HZ) -> RawRecord:
    """
    Linear-interpolation resampling.

    The output holds floor(n * target / rate) samples taken at t = i / target.
    A resampled sample is missing when an input sample it draws weight from
    is missing. Equal rates return the samples unchanged.

    Raises:
        EmptyRecord: If the output would have no samples.
    """
    if target_hz <= 0:
        raise InvalidCutoff(f"target rate must be positive, got {target_hz}")
    if target_hz == record.sample_rate_hz:
        return RawRecord(target_hz, record.samples.copy())
    n_out = int(np.floor(len(record) * target_hz / record.sample_rate_hz))
    if n_out < 1:
        raise EmptyRecord(f"{len(record)} samples at {record.sample_rate_hz} Hz resample to none")
    positions = np.arange(n_out) * (record.sample_rate_hz / target_hz)
    source = np.arange(len(record), dtype=np.float64)
    missing = record.missing
    values = np.interp(positions, source, np.where(missing, 0.0, record.samples))
    if missing.any():
        touched = np.interp(positions, source, missing.astype(np.float64)) > 0.0
        values[touched] = np.nan
    logger.debug("resampled %d samples at %s Hz to %d at %s Hz", len(record), record.sample_rate_hz, n_out, target_hz)
    return RawRecord(target_hz, values)
