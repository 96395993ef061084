"""
Signal ingestion: filtering, resampling, screening, patching, spectra,
synthetic pulse waveforms and the PPGB container.
"""

from .container import decode_ppgb, encode_ppgb, read_ppgb, write_ppgb
from .definitions import TARGET_RATE_HZ, PatchSequence, RawRecord, ScreenReport, Segment, SynthConfig
from .filters import bandpass_filter, design_bandpass, resample
from .screening import impute_linear, preprocess_record, segment_and_screen
from .spectra import PATCH_LEN, amplitude_spectrum, patchify, phase_spectrum, spectrum_len
from .synth import synth_ppg

__all__ = [
    "PATCH_LEN",
    "TARGET_RATE_HZ",
    "PatchSequence",
    "RawRecord",
    "ScreenReport",
    "Segment",
    "SynthConfig",
    "amplitude_spectrum",
    "bandpass_filter",
    "decode_ppgb",
    "design_bandpass",
    "encode_ppgb",
    "impute_linear",
    "patchify",
    "phase_spectrum",
    "preprocess_record",
    "read_ppgb",
    "resample",
    "segment_and_screen",
    "spectrum_len",
    "synth_ppg",
    "write_ppgb",
]
