import numpy as np
import pytest

from domain.dsp.definitions import RawRecord, SynthConfig


def sinusoid(freq_hz: float, rate_hz: float, n: int, amplitude: float = 1.0) -> RawRecord:
    t = np.arange(n) / rate_hz
    return RawRecord(rate_hz, amplitude * np.sin(2 * np.pi * freq_hz * t))


@pytest.fixture
def clean_synth() -> SynthConfig:
    """Two 240 s windows of clean pulses at 125 Hz."""
    return SynthConfig(duration_s=480.0, noise_sigma=0.005, n_records=1, seed=3)
