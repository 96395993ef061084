"""
Tests for run configuration loading.
"""
import json

import pytest

from domain.masking.definitions import MaskPolicyConfig
from domain.vq.augment import PRESETS
from ppgmask.conf import app_settings
from ppgmask.config import ConfigError, RunConfig


@pytest.mark.unit
class TestRunConfig:
    """Test cases for RunConfig."""

    def test_empty_config_gives_defaults(self):
        config = RunConfig.from_dict({})
        assert config == RunConfig()
        assert config.policy == MaskPolicyConfig()
        assert config.preprocess.window == app_settings.DEFAULT_WINDOW_S

    def test_load_none_gives_defaults(self):
        assert RunConfig.load(None) == RunConfig()

    def test_sections_are_read(self, config):
        assert config.synth.n_records == 2
        assert config.preprocess.window == 12.0
        assert config.net.codebook_K == 16
        assert config.net.conv_kernels == (15,)
        assert config.stage1.epochs == 2
        assert config.policy.ratio == 0.5

    def test_top_level_seed_overrides_section_seeds(self, config):
        assert config.seed == 3
        assert config.synth.seed == 3
        assert config.stage1.seed == 3
        assert config.stage1.augment.seed == 3
        assert config.stage2.seed == 3

    def test_with_seed(self, config):
        reseeded = config.with_seed(11)
        assert (reseeded.synth.seed, reseeded.stage2.seed, reseeded.seed) == (11, 11, 11)
        assert reseeded.stage1 != config.stage1

    @pytest.mark.parametrize(
        "data",
        [
            {"sedd": 1},
            {"synth": {"n_record": 2}},
            {"stage1": {"augment": {"sigma": 0.1}}},
            {"net": {"hiden": 8}},
        ],
    )
    def test_unknown_keys_are_rejected(self, data):
        with pytest.raises(ConfigError, match="unknown"):
            RunConfig.from_dict(data)

    def test_policy_inside_stage2_is_rejected(self):
        with pytest.raises(ConfigError, match="top-level 'policy'"):
            RunConfig.from_dict({"stage2": {"policy": {"ratio": 0.4}}})

    @pytest.mark.parametrize(
        "data",
        [
            {"stage1": {"epochs": 0}},
            {"stage2": {"strategy": "greedy"}},
            {"policy": {"ratio": 1.5}},
            {"priors": {"beta": 2.0}},
            {"net": {"hidden": 10, "heads": 4}},
            {"synth": {"duration_s": -1}},
            {"stage1": {"batch_size": "four"}},
            {"seed": -1},
            {"seed": True},
            {"stage1": [1, 2]},
            [],
        ],
    )
    def test_invalid_values_raise_config_error(self, data):
        with pytest.raises(ConfigError):
            RunConfig.from_dict(data)

    def test_augment_preset_by_name(self):
        config = RunConfig.from_dict({"stage1": {"augment": "noise_only"}})
        assert config.stage1.augment == PRESETS["noise_only"]

    def test_unknown_augment_preset(self):
        with pytest.raises(ConfigError, match="preset"):
            RunConfig.from_dict({"stage1": {"augment": "heavy"}})

    def test_echo_reloads_to_the_same_config(self, config):
        echo = json.loads(json.dumps(config.to_dict()))
        assert RunConfig.from_dict(echo).to_dict() == config.to_dict()
        assert "policy" not in echo["stage2"]
        assert echo["preprocess"]["window_s"] == 12.0

    def test_default_echo_resolves_window(self):
        assert RunConfig().to_dict()["preprocess"]["window_s"] == app_settings.DEFAULT_WINDOW_S

    def test_load_from_file(self, config_file, config):
        assert RunConfig.load(config_file) == config

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            RunConfig.load(tmp_path / "absent.json")

    def test_load_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{seed: 1")
        with pytest.raises(ConfigError, match="not valid JSON"):
            RunConfig.load(path)


@pytest.mark.unit
class TestAppSettings:
    """Test cases for app-wide settings."""

    def test_defaults_and_overrides(self, settings):
        settings.PPGMASK = {"BUILD_ID": "abc123"}
        assert app_settings.BUILD_ID == "abc123"
        assert app_settings.MANIFEST_NAME == "manifest.json"

    def test_unknown_setting(self):
        with pytest.raises(AttributeError):
            app_settings.NOT_A_SETTING
