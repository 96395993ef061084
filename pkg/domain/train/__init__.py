"""
Stage-1 tokenizer training, stage-2 masked pretraining and the comparison
harnesses built on them.
"""

from .ablation import DEFAULT_BETAS, ablation_masking, sweep_beta
from .data import as_dataset
from .definitions import OBJECTIVES, STRATEGIES, Stage1Config, Stage2Config, TrainHistory
from .pretrain import ema_update, masked_accuracy, pretrain, region_labels
from .tokenizer import Tokenizer, augmentation_geometry, train_tokenizer

__all__ = [
    "DEFAULT_BETAS",
    "OBJECTIVES",
    "STRATEGIES",
    "Stage1Config",
    "Stage2Config",
    "Tokenizer",
    "TrainHistory",
    "ablation_masking",
    "as_dataset",
    "augmentation_geometry",
    "ema_update",
    "masked_accuracy",
    "pretrain",
    "region_labels",
    "sweep_beta",
    "train_tokenizer",
]
