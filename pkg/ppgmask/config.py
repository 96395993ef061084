"""
Run configuration: one JSON file, one section per domain config.

Every section is optional and falls back to its defaults. Keys that no
section knows are rejected, as are values the section's own validation
refuses. A top-level "seed" replaces every section seed.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, TypeVar

from domain.dsp.definitions import TARGET_RATE_HZ, SynthConfig
from domain.errors import DomainException
from domain.masking.definitions import MaskPolicyConfig
from domain.nets.definitions import NetConfig
from domain.priors.definitions import PriorConfig
from domain.train.definitions import Stage1Config, Stage2Config
from domain.vq.augment import PRESETS, AugmentConfig

from .conf import app_settings

logger = logging.getLogger(__name__)

T = TypeVar("T")


class ConfigError(Exception):
    """Raised when a run configuration cannot be read or does not validate."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(message)


@dataclass(frozen=True)
class PreprocessConfig:
    low_hz: float = 0.5
    high_hz: float = 8.0
    target_hz: float = TARGET_RATE_HZ
    window_s: float | None = None

    @property
    def window(self) -> float:
        return float(self.window_s if self.window_s is not None else app_settings.DEFAULT_WINDOW_S)


SECTIONS: dict[str, type] = {
    "synth": SynthConfig,
    "preprocess": PreprocessConfig,
    "priors": PriorConfig,
    "net": NetConfig,
    "stage1": Stage1Config,
    "stage2": Stage2Config,
    "policy": MaskPolicyConfig,
}


def _build(cls: type[T], values: Any, section: str, **nested: Any) -> T:
    if not isinstance(values, dict):
        raise ConfigError(f"section {section!r} must be an object")
    known = {f.name for f in fields(cls)}  # type: ignore[arg-type]
    unknown = set(values) - known - set(nested)
    if unknown:
        raise ConfigError(f"unknown keys in {section!r}: {sorted(unknown)}")
    try:
        return cls(**{**values, **nested})
    except DomainException as exc:
        raise ConfigError(f"{section}: {exc.message}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{section}: {exc}") from exc


def _augment(values: Any) -> AugmentConfig:
    if isinstance(values, str):
        if values not in PRESETS:
            raise ConfigError(f"unknown augmentation preset {values!r}; choose from {sorted(PRESETS)}")
        return PRESETS[values]
    return _build(AugmentConfig, values, "stage1.augment")


@dataclass(frozen=True)
class RunConfig:
    synth: SynthConfig = field(default_factory=SynthConfig)
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)
    priors: PriorConfig = field(default_factory=PriorConfig)
    net: NetConfig = field(default_factory=NetConfig)
    stage1: Stage1Config = field(default_factory=Stage1Config)
    stage2: Stage2Config = field(default_factory=Stage2Config)
    seed: int | None = None

    @property
    def policy(self) -> MaskPolicyConfig:
        return self.stage2.policy

    @classmethod
    def from_dict(cls, data: Any) -> RunConfig:
        """
        Build and validate a configuration.

        Raises:
            ConfigError: Unknown keys, malformed sections or invalid values.
        """
        if not isinstance(data, dict):
            raise ConfigError("a run configuration must be a JSON object")
        unknown = set(data) - set(SECTIONS) - {"seed"}
        if unknown:
            raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
        seed = data.get("seed")
        if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool) or seed < 0):
            raise ConfigError(f"seed must be a non-negative integer, got {seed!r}")

        stage1_values = data.get("stage1", {})
        if not isinstance(stage1_values, dict):
            raise ConfigError("section 'stage1' must be an object")
        stage1_values = dict(stage1_values)
        augment = _augment(stage1_values.pop("augment", {}))
        policy = _build(MaskPolicyConfig, data.get("policy", {}), "policy")
        stage2_values = data.get("stage2", {})
        if isinstance(stage2_values, dict) and "policy" in stage2_values:
            raise ConfigError("masking policy settings belong in the top-level 'policy' section")
        config = cls(
            synth=_build(SynthConfig, data.get("synth", {}), "synth"),
            preprocess=_build(PreprocessConfig, data.get("preprocess", {}), "preprocess"),
            priors=_build(PriorConfig, data.get("priors", {}), "priors"),
            net=_build(NetConfig, data.get("net", {}), "net"),
            stage1=_build(Stage1Config, stage1_values, "stage1", augment=augment),
            stage2=_build(Stage2Config, stage2_values, "stage2", policy=policy),
            seed=seed,
        )
        return config.with_seed(seed) if seed is not None else config

    @classmethod
    def load(cls, path: str | Path | None) -> RunConfig:
        """Read a JSON config file; None gives the defaults."""
        if path is None:
            return cls()
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        config = cls.from_dict(data)
        logger.debug("loaded run config from %s", path)
        return config

    def with_seed(self, seed: int) -> RunConfig:
        return replace(
            self,
            synth=replace(self.synth, seed=seed),
            stage1=replace(self.stage1, seed=seed, augment=replace(self.stage1.augment, seed=seed)),
            stage2=replace(self.stage2, seed=seed),
            seed=seed,
        )

    def to_dict(self) -> dict[str, Any]:
        """Plain-JSON echo of the effective configuration."""
        data = {name: asdict(getattr(self, name)) for name in SECTIONS if name != "policy"}
        data["policy"] = data["stage2"].pop("policy")
        data["preprocess"]["window_s"] = self.preprocess.window
        data["seed"] = self.seed
        return data
