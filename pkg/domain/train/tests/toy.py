import numpy as np

from domain.dsp.definitions import SynthConfig
from domain.dsp.screening import preprocess_record
from domain.dsp.spectra import patchify
from domain.dsp.synth import synth_ppg
from domain.nets.definitions import NetConfig

TINY = NetConfig(
    conv_channels=(1, 4),
    conv_kernels=(15,),
    conv_strides=(8,),
    conv_paddings=(7,),
    n_encoder_layers=1,
    n_decoder_layers=1,
    student_layers=1,
    teacher_layers=1,
    hidden=16,
    mlp=32,
    heads=2,
    teacher_hidden=16,
    teacher_mlp=32,
    teacher_heads=2,
    codebook_K=16,
    codebook_D=8,
    seq_N=24,
)


def toy_patches(
    n_segments: int, n_patches: int = 24, seed: int = 0, flat_every: int = 4, flat_levels: bool = False
) -> np.ndarray:
    """
    (n_segments, n_patches, 50) preprocessed pulse patches; every
    flat_every-th patch is replaced by a constant: its own mean, or with
    flat_levels a uniform random level in [0, 1] that context cannot predict.
    """
    config = SynthConfig(duration_s=n_segments * n_patches + 1.0, noise_sigma=0.005, n_records=1, seed=seed)
    segments, _ = preprocess_record(synth_ppg(config), window_s=float(n_patches))
    data = np.stack([patchify(s).patches for s in segments[:n_segments]])
    if flat_every:
        flat = data[:, ::flat_every]
        if flat_levels:
            levels = np.random.default_rng(seed).uniform(0.0, 1.0, size=flat.shape[:-1] + (1,))
        else:
            levels = flat.mean(axis=-1, keepdims=True)
        data[:, ::flat_every] = np.broadcast_to(levels, flat.shape)
    return data
