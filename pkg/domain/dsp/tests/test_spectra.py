import numpy as np
import pytest

from domain.dsp.container import decode_ppgb, encode_ppgb, read_ppgb, write_ppgb
from domain.dsp.definitions import RawRecord, Segment, SynthConfig
from domain.dsp.errors import ContainerFormatError, InvalidSchedule, PatchMismatch
from domain.dsp.spectra import amplitude_spectrum, patchify, phase_spectrum
from domain.dsp.synth import synth_ppg


@pytest.mark.unit
class TestPatchify:
    def test_full_window(self) -> None:
        patches = patchify(Segment(np.zeros(12000)), 50)
        assert patches.n_patches == 240

    def test_concat_reproduces_segment(self) -> None:
        samples = np.random.default_rng(0).uniform(size=100)
        patches = patchify(Segment(samples), 50)
        assert patches.patches.shape == (2, 50)
        np.testing.assert_array_equal(patches.concat(), samples)

    def test_non_divisible(self) -> None:
        with pytest.raises(PatchMismatch):
            patchify(Segment(np.zeros(101)), 50)


@pytest.mark.unit
class TestSpectra:
    def test_alternating_patch(self) -> None:
        np.testing.assert_allclose(amplitude_spectrum(np.array([1.0, -1.0, 1.0, -1.0])), [0, 0, 4], atol=1e-12)

    def test_zero_patch(self) -> None:
        np.testing.assert_array_equal(amplitude_spectrum(np.zeros(50)), np.zeros(26))

    def test_shift_invariance(self) -> None:
        rng = np.random.default_rng(1)
        patch = rng.normal(size=50)
        for shift in (1, 7, 33):
            diff = amplitude_spectrum(np.roll(patch, shift)) - amplitude_spectrum(patch)
            assert np.max(np.abs(diff)) < 1e-9

    def test_batched_and_phase_shapes(self) -> None:
        stack = np.random.default_rng(2).normal(size=(3, 4, 50))
        assert amplitude_spectrum(stack).shape == (3, 4, 26)
        phases = phase_spectrum(stack)
        assert phases.shape == (3, 4, 26)
        assert np.all(np.abs(phases) <= np.pi)


@pytest.mark.unit
class TestSynth:
    def test_same_seed_same_samples(self) -> None:
        config = SynthConfig(duration_s=30.0, seed=9)
        assert synth_ppg(config).samples.tobytes() == synth_ppg(config).samples.tobytes()

    def test_records_differ_by_index(self) -> None:
        config = SynthConfig(duration_s=30.0, seed=9)
        assert not np.array_equal(synth_ppg(config, 0).samples, synth_ppg(config, 1).samples)

    def test_clean_waveform_is_periodic(self) -> None:
        from scipy.signal import find_peaks

        config = SynthConfig(
            duration_s=30.0,
            heart_rate_bpm=(75.0, 75.0),
            noise_sigma=0.0,
            wander_amplitude=0.0,
        )
        samples = synth_ppg(config).samples
        peaks, _ = find_peaks(samples, height=0.8)
        spacing = np.diff(peaks)
        assert np.all(np.abs(spacing - 100) <= 1)  # 0.8 s at 125 Hz
        np.testing.assert_allclose(samples[100:], samples[:-100], atol=1e-9)

    def test_flatline_span_is_constant(self) -> None:
        config = SynthConfig(duration_s=30.0, flatline_spans=((10.0, 20.0),))
        span = synth_ppg(config).samples[1250:2500]
        assert np.all(span == span[0])

    def test_missing_span_is_nan(self) -> None:
        record = synth_ppg(SynthConfig(duration_s=30.0, missing_spans=((1.0, 2.0),)))
        assert int(record.missing.sum()) == 125

    @pytest.mark.parametrize("span", [(-1.0, 2.0), (5.0, 4.0), (20.0, 31.0)])
    def test_invalid_spans(self, span: tuple[float, float]) -> None:
        with pytest.raises(InvalidSchedule):
            SynthConfig(duration_s=30.0, spike_spans=(span,))


@pytest.mark.unit
class TestContainer:
    def test_round_trip_keeps_missing(self, tmp_path) -> None:
        samples = np.array([0.25, np.nan, -1.5, 3.0])
        path = write_ppgb(tmp_path / "rec.ppgb", RawRecord(50.0, samples))
        record = read_ppgb(path)
        assert record.sample_rate_hz == 50.0
        np.testing.assert_array_equal(record.samples, samples)

    def test_header_layout(self) -> None:
        payload = encode_ppgb(RawRecord(125.0, [1.0, 2.0]))
        assert payload[:4] == b"PPGB"
        assert len(payload) == 4 + 4 + 4 + 8 + 2 * 4

    def test_bad_magic(self) -> None:
        payload = b"XXXX" + encode_ppgb(RawRecord(50.0, [1.0]))[4:]
        with pytest.raises(ContainerFormatError):
            decode_ppgb(payload)

    def test_truncated(self) -> None:
        with pytest.raises(ContainerFormatError):
            decode_ppgb(encode_ppgb(RawRecord(50.0, [1.0, 2.0]))[:-1])
