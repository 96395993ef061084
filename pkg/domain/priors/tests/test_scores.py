import numpy as np
import pytest

from domain.dsp.synth import pulse_train
from domain.priors.definitions import PriorConfig
from domain.priors.errors import PriorConfigError, ShapeError
from domain.priors.scores import (absolute_validity, prior_score, relative_stability,
                                  score_segment, skewness_score)

CFG = PriorConfig()


def clean_beat() -> np.ndarray:
    """One second of a 60 bpm pulse at 50 Hz."""
    return pulse_train(np.arange(50) / 50.0, 1.0, 0.3)


@pytest.mark.unit
class TestRelativeStability:
    def test_equal_sigmas_score_one(self) -> None:
        q, s_rel = relative_stability(np.full(6, 0.3), CFG)
        np.testing.assert_array_equal(q, 0.0)
        np.testing.assert_array_equal(s_rel, 1.0)

    def test_outlier_with_floored_mad(self) -> None:
        _, s_rel = relative_stability(np.array([1.0, 1.0, 1.0, 1.0, 5.0]), CFG)
        np.testing.assert_array_equal(s_rel[:4], 1.0)
        assert s_rel[4] < 1e-12

    def test_median_patch_scores_one(self) -> None:
        _, s_rel = relative_stability(np.array([0.1, 0.7, 0.4, 2.0, 0.2]), CFG)
        assert s_rel[2] == 1.0

    def test_hand_value(self) -> None:
        # median 2, MAD 1
        q, s_rel = relative_stability(np.array([1.0, 2.0, 4.0]), CFG)
        np.testing.assert_allclose(q, [-0.6745, 0.0, 1.349])
        assert s_rel[2] == pytest.approx(np.exp(-0.2 * 1.349**2), abs=1e-12)

    def test_even_count_uses_middle_mean(self) -> None:
        q, _ = relative_stability(np.array([1.0, 2.0, 3.0, 4.0]), CFG)
        # median 2.5, MAD 1.0
        np.testing.assert_allclose(q, 0.6745 * np.array([-1.5, -0.5, 0.5, 1.5]))


@pytest.mark.unit
class TestAbsoluteValidity:
    def test_at_sigma_min(self) -> None:
        assert float(absolute_validity(0.05, CFG)) == pytest.approx(0.5 / (1 + np.exp(-9.75)), abs=1e-12)
        assert float(absolute_validity(0.05, CFG)) == pytest.approx(0.49997, abs=1e-5)

    def test_at_zero(self) -> None:
        assert float(absolute_validity(0.0, CFG)) == pytest.approx(0.07585, abs=1e-5)

    def test_upper_gate_half_at_sigma_max(self) -> None:
        lower = 1 / (1 + np.exp(-50 * (2.0 - 0.05)))
        assert float(absolute_validity(2.0, CFG)) == pytest.approx(0.5 * lower, abs=1e-12)

    def test_monotone_outside_the_band(self) -> None:
        rising = absolute_validity(np.linspace(0.0, 0.05, 50), CFG)
        falling = absolute_validity(np.linspace(2.0, 10.0, 50), CFG)
        assert np.all(np.diff(rising) >= 0)
        assert np.all(np.diff(falling) <= 0)


@pytest.mark.unit
class TestSkewness:
    def test_symmetric(self) -> None:
        assert float(skewness_score(np.array([-1.0, 0.0, 1.0]))) == 0.0

    def test_hand_value(self) -> None:
        score = float(skewness_score(np.array([0.0, 0.0, 0.0, 1.0])))
        assert score == pytest.approx(np.tanh(2 / np.sqrt(3)), abs=1e-12)
        assert float(skewness_score(np.array([0.0, 0.0, 0.0, 1.0]))) == pytest.approx(0.8193, abs=1e-4)

    def test_constant_patch(self) -> None:
        assert float(skewness_score(np.full(50, 0.4))) == 0.0

    def test_batched(self) -> None:
        batch = np.stack([np.array([0.0, 0.0, 0.0, 1.0]), np.full(4, 2.0)])
        np.testing.assert_allclose(skewness_score(batch), [np.tanh(2 / np.sqrt(3)), 0.0])


@pytest.mark.unit
class TestPriorScore:
    def test_endpoints(self) -> None:
        s_amp, s_skew = np.array([0.1, 0.9]), np.array([0.7, 0.2])
        np.testing.assert_array_equal(prior_score(s_amp, s_skew, 0.0), s_amp)
        np.testing.assert_array_equal(prior_score(s_amp, s_skew, 1.0), s_skew)

    def test_midpoint(self) -> None:
        assert float(prior_score(np.array([0.8]), np.array([0.4]), 0.5)[0]) == pytest.approx(0.6)

    def test_length_mismatch(self) -> None:
        with pytest.raises(ShapeError):
            prior_score(np.ones(3), np.ones(4), 0.5)

    def test_config_validation(self) -> None:
        with pytest.raises(PriorConfigError):
            PriorConfig(beta=1.5)
        with pytest.raises(PriorConfigError):
            PriorConfig(sigma_min=2.0, sigma_max=1.0)


@pytest.mark.unit
class TestScoreSegment:
    def test_flat_segment_scores_near_zero(self) -> None:
        scores = score_segment(np.full((8, 50), 0.5), CFG)
        np.testing.assert_allclose(scores.s_amp, 0.0759, atol=1e-4)
        np.testing.assert_array_equal(scores.s_skew, 0.0)
        assert np.all(scores.s_prior < 0.04)

    def test_clean_beats_outscore_flat_and_spike(self) -> None:
        rng = np.random.default_rng(0)
        beat = clean_beat()
        patches = np.stack([beat] * 6 + [np.full(50, beat.mean()), rng.normal(0.0, 3.0, 50)])
        scores = score_segment(patches, CFG)
        assert scores.sigma[7] > CFG.sigma_max
        clean = scores.s_prior[0]
        assert clean > scores.s_prior[6]
        assert clean > scores.s_prior[7]
        assert clean == pytest.approx(scores.s_prior.max())

    def test_single_patch(self) -> None:
        scores = score_segment(clean_beat()[None, :], CFG)
        assert scores.s_rel[0] == 1.0

    def test_bounds_on_random_inputs(self) -> None:
        rng = np.random.default_rng(1)
        for beta in (0.0, 0.3, 0.5, 1.0):
            cfg = PriorConfig(beta=beta)
            scores = score_segment(rng.normal(0.0, rng.uniform(0.0, 3.0), size=(4, 12, 50)), cfg)
            for values in (scores.s_rel, scores.s_abs, scores.s_amp, scores.s_prior):
                assert np.all((values >= 0.0) & (values <= 1.0))
            assert np.all((scores.s_skew >= 0.0) & (scores.s_skew < 1.0))

    def test_frame_columns(self) -> None:
        frame = score_segment(np.random.default_rng(2).uniform(size=(3, 50)), CFG).to_frame("seg-0")
        assert list(frame.columns) == [
            "segment_id", "patch_index", "sigma", "S_rel", "S_abs", "S_amp", "S_skew", "S_prior",
        ]
        assert len(frame) == 3
