"""
Pytest fixtures for ppgmask tests.

The run configuration here keeps everything tiny: two 60 s records cut
into 12 s windows (12 patches of 50 samples), a one-layer network and two
training epochs.
"""
import json

import pytest

from ppgmask.config import RunConfig
from ppgmask.services import SignalService

TINY_NET = {
    "conv_channels": [1, 4],
    "conv_kernels": [15],
    "conv_strides": [8],
    "conv_paddings": [7],
    "n_encoder_layers": 1,
    "n_decoder_layers": 1,
    "student_layers": 1,
    "teacher_layers": 1,
    "hidden": 16,
    "mlp": 32,
    "heads": 2,
    "teacher_hidden": 16,
    "teacher_mlp": 32,
    "teacher_heads": 2,
    "codebook_K": 16,
    "codebook_D": 8,
    "seq_N": 24,
}

N_RECORDS = 2
WINDOWS_PER_RECORD = 5
PATCHES_PER_SEGMENT = 12


@pytest.fixture
def config_dict():
    """Plain-JSON configuration for a desk-sized run."""
    return {
        "seed": 3,
        "synth": {"duration_s": 60.0, "n_records": N_RECORDS},
        "preprocess": {"window_s": 12.0},
        "net": dict(TINY_NET),
        "stage1": {"epochs": 2, "batch_size": 4, "warmup_epochs": 1, "peak_lr": 3e-3},
        "stage2": {"epochs": 2, "batch_size": 4, "warmup_epochs": 1},
        "policy": {"ratio": 0.5, "max_span": 5},
    }


@pytest.fixture
def config(config_dict):
    return RunConfig.from_dict(config_dict)


@pytest.fixture
def config_file(tmp_path, config_dict):
    """The same configuration written to disk, for commands."""
    path = tmp_path / "run.json"
    path.write_text(json.dumps(config_dict))
    return path


@pytest.fixture
def write_config(tmp_path, config_dict):
    """Write a variant of the configuration; returns its path."""

    def _write(name="variant.json", **sections):
        path = tmp_path / name
        path.write_text(json.dumps({**config_dict, **sections}))
        return path

    return _write


@pytest.fixture
def raw_dir(tmp_path, config):
    out = tmp_path / "raw"
    SignalService.generate_synth(config, out)
    return out


@pytest.fixture
def segments_dir(tmp_path, config, raw_dir):
    out = tmp_path / "segments"
    SignalService.preprocess_directory(config, raw_dir, out)
    return out
