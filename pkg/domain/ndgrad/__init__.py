"""
Reverse-mode automatic differentiation over double-precision numpy arrays,
plus the optimizer, schedule and checkpoint format used to train the networks.
"""

from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .gradcheck import GradCheckResult, check_gradients, op_suite
from .module import Module, parameter, trunc_normal
from .optim import AdamW, OptimState, adamw_step, clip_grad_norm, cosine_schedule
from .tensor import Tape, Tensor, as_tensor, backward

__all__ = [
    "AdamW",
    "Checkpoint",
    "GradCheckResult",
    "Module",
    "OptimState",
    "Tape",
    "Tensor",
    "adamw_step",
    "as_tensor",
    "backward",
    "check_gradients",
    "clip_grad_norm",
    "cosine_schedule",
    "load_checkpoint",
    "op_suite",
    "parameter",
    "save_checkpoint",
    "trunc_normal",
]
