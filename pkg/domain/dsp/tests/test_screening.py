import numpy as np
import pytest

from domain.dsp.definitions import RawRecord, SynthConfig
from domain.dsp.screening import (flatline_runs, impute_linear, preprocess_record,
                                  segment_and_screen)
from domain.dsp.synth import synth_ppg

from .conftest import sinusoid


@pytest.mark.unit
class TestSegmentAndScreen:
    def test_toy_window_is_min_max_normalized(self) -> None:
        segments, report = segment_and_screen(RawRecord(50.0, [2.0, 4.0, 6.0]), window_s=3 / 50)
        assert report.kept == 1
        np.testing.assert_allclose(segments[0].samples, [0.0, 0.5, 1.0])

    def test_window_with_quarter_missing_is_dropped(self) -> None:
        record = sinusoid(1.2, 50.0, 400)
        samples = record.samples.copy()
        samples[250:300] = np.nan  # 25% of the second window
        segments, report = segment_and_screen(RawRecord(50.0, samples), window_s=4.0)
        assert report.kept == 1
        assert report.dropped_missing == 1
        assert segments[0].start_index == 0

    def test_small_gap_is_imputed(self) -> None:
        samples = np.linspace(0.0, 1.0, 200)
        samples[0:5] = np.nan
        samples[100:120] = np.nan
        segments, report = segment_and_screen(RawRecord(50.0, samples), window_s=4.0)
        assert report.kept == 1
        out = segments[0].samples
        assert not np.isnan(out).any()
        assert out[0] == out[5]  # leading gap takes the nearest valid value

    def test_constant_window_is_a_flatline(self) -> None:
        segments, report = segment_and_screen(RawRecord(50.0, np.full(200, 3.0)), window_s=4.0)
        assert segments == []
        assert report.dropped_flatline == 1

    def test_long_flat_run_is_dropped_short_one_kept(self) -> None:
        base = sinusoid(1.1, 50.0, 800).samples
        long_flat = base.copy()
        long_flat[100:250] = long_flat[100]  # 3 s
        short_flat = base.copy()
        short_flat[100:150] = short_flat[100]  # 1 s
        _, report_long = segment_and_screen(RawRecord(50.0, long_flat), window_s=16.0)
        _, report_short = segment_and_screen(RawRecord(50.0, short_flat), window_s=16.0)
        assert report_long.dropped_flatline == 1
        assert report_short.kept == 1

    def test_outputs_span_unit_interval(self) -> None:
        rng = np.random.default_rng(4)
        record = RawRecord(50.0, rng.normal(size=2000) * 7 + 3)
        segments, _ = segment_and_screen(record, window_s=8.0)
        assert len(segments) == 5
        for segment in segments:
            assert segment.samples.min() == 0.0
            assert segment.samples.max() == 1.0

    def test_rescreening_normalized_segments_is_identity(self) -> None:
        record = sinusoid(0.9, 50.0, 1000)
        first, _ = segment_and_screen(record, window_s=10.0)
        for segment in first:
            again, _ = segment_and_screen(RawRecord(50.0, segment.samples), window_s=10.0)
            np.testing.assert_allclose(again[0].samples, segment.samples, rtol=0, atol=1e-9)

    def test_trailing_partial_window_is_not_counted(self) -> None:
        _, report = segment_and_screen(sinusoid(1.0, 50.0, 450), window_s=4.0)
        assert (report.kept, report.dropped) == (2, 0)


@pytest.mark.unit
def test_flatline_runs_report_sample_ranges() -> None:
    samples = np.arange(300, dtype=float)
    samples[50:200] = 50.0
    assert flatline_runs(samples, 50.0) == [(50, 200)]


@pytest.mark.unit
def test_impute_linear_interior_gap() -> None:
    filled = impute_linear(np.array([0.0, np.nan, np.nan, 3.0]))
    np.testing.assert_allclose(filled, [0.0, 1.0, 2.0, 3.0])


@pytest.mark.integration
class TestPreprocessRecord:
    def test_clean_record_has_no_drops(self, clean_synth: SynthConfig) -> None:
        segments, report = preprocess_record(synth_ppg(clean_synth))
        assert report.dropped == 0
        assert len(segments) == 2
        assert all(len(s) == 12000 for s in segments)

    def test_artifacts_are_dropped_by_reason(self) -> None:
        config = SynthConfig(
            duration_s=480.0,
            missing_spans=((10.0, 70.0),),
            flatline_spans=((300.0, 340.0),),
            n_records=1,
        )
        segments, report = preprocess_record(synth_ppg(config))
        assert segments == []
        assert report.dropped_missing == 1
        assert report.dropped_flatline == 1

    def test_bitwise_deterministic(self, clean_synth: SynthConfig) -> None:
        first, _ = preprocess_record(synth_ppg(clean_synth))
        second, _ = preprocess_record(synth_ppg(clean_synth))
        assert [s.samples.tobytes() for s in first] == [s.samples.tobytes() for s in second]
