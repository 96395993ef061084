"""
Window segmentation, artifact screening and the full preprocessing chain.
"""

from __future__ import annotations

import logging

import numpy as np

from .definitions import TARGET_RATE_HZ, RawRecord, ScreenReport, Segment
from .filters import bandpass_filter, resample

logger = logging.getLogger(__name__)

MAX_MISSING_FRACTION = 0.2
FLATLINE_MIN_S = 2.0
FLATLINE_STD = 1e-6
FLATLINE_COVERAGE = 0.1
FLAT_STEP = 1e-6


def impute_linear(samples: np.ndarray) -> np.ndarray:
    """
    Fill NaN by linear interpolation between the nearest valid neighbours;
    leading and trailing gaps take the nearest valid value.
    """
    missing = np.isnan(samples)
    if not missing.any():
        return samples.copy()
    if missing.all():
        return np.zeros_like(samples)
    index = np.arange(samples.size)
    filled = samples.copy()
    filled[missing] = np.interp(index[missing], index[~missing], samples[~missing])
    return filled


def flatline_runs(samples: np.ndarray, sample_rate_hz: float) -> list[tuple[int, int]]:
    """
    Maximal runs [start, stop) of at least FLATLINE_MIN_S seconds over which
    consecutive steps stay below FLAT_STEP and the values' standard deviation
    stays below FLATLINE_STD.
    """
    min_len = int(np.ceil(FLATLINE_MIN_S * sample_rate_hz))
    if samples.size < max(min_len, 2):
        return []
    still = np.abs(np.diff(samples)) < FLAT_STEP
    # run boundaries in the step sequence; a run of s still steps covers s + 1 samples
    edges = np.diff(np.concatenate(([0], still.astype(np.int8), [0])))
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)
    runs = []
    for start, stop in zip(starts, stops):
        length = stop - start + 1
        if length >= min_len and np.std(samples[start : stop + 1]) < FLATLINE_STD:
            runs.append((int(start), int(stop + 1)))
    return runs


def is_flatline(samples: np.ndarray, sample_rate_hz: float) -> bool:
    """True for a degenerate range or any flatline run covering over FLATLINE_COVERAGE of the window."""
    if np.ptp(samples) < FLATLINE_STD:
        return True
    limit = FLATLINE_COVERAGE * samples.size
    return any(stop - start > limit for start, stop in flatline_runs(samples, sample_rate_hz))


def normalize_minmax(samples: np.ndarray) -> np.ndarray:
    low = samples.min()
    return (samples - low) / (samples.max() - low)


def segment_and_screen(
    record: RawRecord,
    window_s: float = 240.0,
    flat_reference: RawRecord | None = None,
) -> tuple[list[Segment], ScreenReport]:
    """
    Cut a record into non-overlapping windows and keep the clean ones.

    A window is dropped when more than 20% of it is missing, or when it is a
    flatline (see is_flatline). Kept windows are imputed and min-max
    normalized to [0, 1]. A trailing partial window is discarded without
    being counted.

    Args:
        record: Record at its final rate.
        window_s: Window length in seconds.
        flat_reference: Record on the same time grid used for the flatline
            screen instead of `record`; preprocessing passes the unfiltered
            signal here, since filtering smears sensor dropouts.

    Returns:
        The kept segments and the drop counts by reason.
    """
    window = max(int(round(window_s * record.sample_rate_hz)), 1)
    reference = record if flat_reference is None else flat_reference
    segments: list[Segment] = []
    kept = dropped_missing = dropped_flatline = 0
    for start in range(0, len(record) - window + 1, window):
        raw = record.samples[start : start + window]
        fraction = float(np.isnan(raw).mean())
        if fraction > MAX_MISSING_FRACTION:
            dropped_missing += 1
            logger.info("dropped window at %d: %.0f%% missing", start, 100 * fraction)
            continue
        values = impute_linear(raw)
        flat_source = impute_linear(reference.samples[start : start + window])
        if is_flatline(flat_source, record.sample_rate_hz) or np.ptp(values) < FLATLINE_STD:
            dropped_flatline += 1
            logger.info("dropped window at %d: flatline", start)
            continue
        segments.append(Segment(normalize_minmax(values), record.sample_rate_hz, start))
        kept += 1
    report = ScreenReport(kept=kept, dropped_missing=dropped_missing, dropped_flatline=dropped_flatline)
    return segments, report


def preprocess_record(
    record: RawRecord,
    low_hz: float = 0.5,
    high_hz: float = 8.0,
    target_hz: float = TARGET_RATE_HZ,
    window_s: float = 240.0,
) -> tuple[list[Segment], ScreenReport]:
    """
    The whole chain: impute, bandpass, restore the missing positions,
    resample, then segment and screen.
    """
    missing = record.missing
    imputed = RawRecord(record.sample_rate_hz, impute_linear(record.samples))
    filtered = bandpass_filter(imputed, low_hz, high_hz).samples
    filtered[missing] = np.nan
    resampled = resample(RawRecord(record.sample_rate_hz, filtered), target_hz)
    reference = resample(record, target_hz)
    segments, report = segment_and_screen(resampled, window_s, flat_reference=reference)
    logger.info(
        "preprocessed %.1f s record: kept %d, dropped %d missing, %d flatline",
        record.duration_s,
        report.kept,
        report.dropped_missing,
        report.dropped_flatline,
    )
    return segments, report
