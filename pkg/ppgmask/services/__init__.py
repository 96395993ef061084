"""
Service layer for ppgmask.

This module provides the file-level operations behind each command:
- Run manifests
- Synthetic generation, preprocessing and dataset loading
- Prior scoring and mask generation
- Tokenizer training, masked pretraining and the comparison harnesses
- Codebook geometry and gradient diagnostics
"""

from .manifest_service import ManifestService
from .signal_service import SignalService
from .scoring_service import ScoringService
from .training_service import TrainingService
from .masking_service import MaskingService
from .validation_service import ValidationService

__all__ = [
    "ManifestService",
    "SignalService",
    "ScoringService",
    "TrainingService",
    "MaskingService",
    "ValidationService",
]
