"""
The masking teacher's decision process: prior-biased logits, Gumbel-Top-k
sampling, span repair, Plackett-Luce likelihood and the REINFORCE objective.
"""

from .definitions import MaskPolicyConfig, MaskSample, PolicyMetrics
from .policy import (
    final_logits,
    log_prob,
    policy_entropy,
    policy_metrics,
    prior_bias,
    sequence_log_prob,
    teacher_loss,
)
from .sampling import (
    element_rng,
    gumbel_topk,
    masked_runs,
    random_mask,
    repair,
    sample_batch,
    sample_mask,
    span_repair,
    static_prior_mask,
)

__all__ = [
    "MaskPolicyConfig",
    "MaskSample",
    "PolicyMetrics",
    "element_rng",
    "final_logits",
    "gumbel_topk",
    "log_prob",
    "masked_runs",
    "policy_entropy",
    "policy_metrics",
    "prior_bias",
    "random_mask",
    "repair",
    "sample_batch",
    "sample_mask",
    "sequence_log_prob",
    "span_repair",
    "static_prior_mask",
    "teacher_loss",
]
