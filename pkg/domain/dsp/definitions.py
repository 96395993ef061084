from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyRecord, InvalidRecord, InvalidSchedule

TARGET_RATE_HZ = 50.0

Span = tuple[float, float]


@dataclass(frozen=True, eq=False)
class RawRecord:
    """
    A single-channel signal at a fixed rate. Missing samples are NaN.
    """

    sample_rate_hz: float
    samples: np.ndarray

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "samples", samples)
        if not self.sample_rate_hz > 0:
            raise InvalidRecord(f"sample rate must be positive, got {self.sample_rate_hz}")
        if samples.size == 0:
            raise EmptyRecord("record has no samples")

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def duration_s(self) -> float:
        return len(self) / self.sample_rate_hz

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.samples)


@dataclass(frozen=True, eq=False)
class Segment:
    """A screened, min-max normalized window; samples lie in [0, 1]."""

    samples: np.ndarray
    sample_rate_hz: float = TARGET_RATE_HZ
    start_index: int = 0

    def __len__(self) -> int:
        return int(self.samples.size)


@dataclass(frozen=True, eq=False)
class PatchSequence:
    """N x T non-overlapping patches of a segment, in order."""

    patches: np.ndarray

    @property
    def n_patches(self) -> int:
        return int(self.patches.shape[0])

    @property
    def patch_len(self) -> int:
        return int(self.patches.shape[1])

    def concat(self) -> np.ndarray:
        return self.patches.reshape(-1)


@dataclass(frozen=True)
class ScreenReport:
    """Counts from one pass of segment_and_screen."""

    kept: int = 0
    dropped_missing: int = 0
    dropped_flatline: int = 0

    @property
    def dropped(self) -> int:
        return self.dropped_missing + self.dropped_flatline

    def __add__(self, other: ScreenReport) -> ScreenReport:
        return ScreenReport(
            kept=self.kept + other.kept,
            dropped_missing=self.dropped_missing + other.dropped_missing,
            dropped_flatline=self.dropped_flatline + other.dropped_flatline,
        )


@dataclass(frozen=True)
class SynthConfig:
    """
    Parameters for synthetic pulse waveforms.

    Spans are (start_s, end_s) pairs in seconds. Artifacts are applied in the
    order spikes, flatlines, missing, each overwriting what came before.
    """

    duration_s: float = 480.0
    sample_rate_hz: float = 125.0
    heart_rate_bpm: tuple[float, float] = (60.0, 90.0)
    dicrotic_amplitude: float = 0.3
    wander_amplitude: float = 0.1
    wander_hz: float = 0.2
    noise_sigma: float = 0.01
    spike_amplitude: float = 3.0
    flatline_spans: tuple[Span, ...] = ()
    spike_spans: tuple[Span, ...] = ()
    missing_spans: tuple[Span, ...] = ()
    n_records: int = 4
    seed: int = 0

    def __post_init__(self) -> None:
        if self.duration_s <= 0 or self.sample_rate_hz <= 0:
            raise InvalidSchedule("duration and sample rate must be positive")
        low, high = self.heart_rate_bpm
        if not 0 < low <= high:
            raise InvalidSchedule(f"heart rate range {self.heart_rate_bpm} is invalid")
        if self.wander_hz <= 0 or self.noise_sigma < 0 or self.n_records < 1:
            raise InvalidSchedule("wander frequency, noise sigma or record count out of range")
        for name in ("flatline_spans", "spike_spans", "missing_spans"):
            spans = tuple(tuple(float(v) for v in span) for span in getattr(self, name))
            for span in spans:
                if len(span) != 2 or not 0 <= span[0] < span[1] <= self.duration_s:
                    raise InvalidSchedule(f"{name}: span {span} not inside [0, {self.duration_s}]")
            object.__setattr__(self, name, spans)
        object.__setattr__(self, "heart_rate_bpm", (float(low), float(high)))
