"""
Codebook, quantization, tokenizer losses, augmentation and codebook
geometry checks.
"""

from .augment import PRESETS, AugmentConfig, augment
from .codebook import Codebook, QuantizeResult, quantize, unused_codes
from .geometry import GeometryReport, geometry_report, nearest_code_distance, voronoi_radius
from .losses import COMMITMENT, consistency_loss, spectral_loss, vq_loss

__all__ = [
    "COMMITMENT",
    "PRESETS",
    "AugmentConfig",
    "Codebook",
    "GeometryReport",
    "QuantizeResult",
    "augment",
    "consistency_loss",
    "geometry_report",
    "nearest_code_distance",
    "quantize",
    "spectral_loss",
    "unused_codes",
    "voronoi_radius",
    "vq_loss",
]
