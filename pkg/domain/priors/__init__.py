"""
Per-patch amplitude-stability and morphology scores.
"""

from .definitions import PriorConfig, PriorScores
from .scores import absolute_validity, prior_score, relative_stability, score_segment, skewness_score

__all__ = [
    "PriorConfig",
    "PriorScores",
    "absolute_validity",
    "prior_score",
    "relative_stability",
    "score_segment",
    "skewness_score",
]
