"""
Stage 2: masked-token pretraining of the student, with masks drawn by the
prior-biased teacher policy.
"""

from __future__ import annotations

import copy
import logging
from typing import Mapping

import numpy as np

from domain.masking.errors import InvalidK
from domain.masking.policy import final_logits, log_prob, policy_metrics, prior_bias, teacher_loss
from domain.masking.sampling import sample_batch
from domain.ndgrad import ops
from domain.ndgrad.module import Module
from domain.ndgrad.optim import AdamW, cosine_schedule
from domain.ndgrad.tensor import Tensor, backward
from domain.nets.models import StudentNet, TeacherNet
from domain.priors.definitions import PriorConfig, PriorScores
from domain.priors.scores import score_segment

from .data import as_dataset, batch_indices, n_batches
from .definitions import Stage2Config, TrainHistory
from .errors import FrozenViolation, ShapeError
from .tokenizer import Tokenizer

logger = logging.getLogger(__name__)

Accuracy = tuple[float | None, float | None, float | None]
AVERAGED = ("student_ce", "teacher_loss", "teacher_entropy", "teacher_prob_masked", "teacher_prob_all")


def region_labels(
    scores: PriorScores, amp_threshold: float = 0.5, skew_threshold: float = 0.5
) -> tuple[np.ndarray, np.ndarray]:
    """Peak patches clear both thresholds, flat patches clear neither; the rest are unlabelled."""
    high_amp = scores.s_amp >= amp_threshold
    high_skew = scores.s_skew >= skew_threshold
    return high_amp & high_skew, ~high_amp & ~high_skew


def accuracy_counts(
    logits: np.ndarray,
    targets: np.ndarray,
    mask: np.ndarray,
    peak: np.ndarray,
    flat: np.ndarray,
) -> np.ndarray:
    """(3, 2) array of [correct, total] over masked positions: all, peak, flat."""
    hits = np.argmax(logits, axis=-1) == targets
    mask = np.asarray(mask, dtype=bool)
    rows = []
    for selected in (mask, mask & peak, mask & flat):
        rows.append((np.count_nonzero(hits & selected), np.count_nonzero(selected)))
    return np.array(rows, dtype=np.int64)


def _ratios(counts: np.ndarray) -> Accuracy:
    return tuple(float(c) / t if t else None for c, t in counts)  # type: ignore[return-value]


def masked_accuracy(
    logits: np.ndarray,
    targets: np.ndarray,
    mask: np.ndarray,
    peak: np.ndarray,
    flat: np.ndarray,
) -> Accuracy:
    """
    Top-1 accuracy over masked positions, overall and per region.

    A region with no masked position reports None rather than 0.
    """
    return _ratios(accuracy_counts(logits, targets, mask, peak, flat))


def ema_update(
    shadow: dict[str, np.ndarray],
    params: Module | Mapping[str, np.ndarray],
    decay: float = 0.996,
) -> dict[str, np.ndarray]:
    """
    shadow <- decay * shadow + (1 - decay) * params, in place.

    Raises:
        ShapeError: The names or shapes of shadow and params differ.
    """
    current = params.state_dict() if isinstance(params, Module) else params
    if set(current) != set(shadow):
        raise ShapeError("EMA shadow and parameters hold different tensors")
    for name, value in current.items():
        if shadow[name].shape != np.shape(value):
            raise ShapeError(f"{name}: shadow {shadow[name].shape} against parameter {np.shape(value)}")
        shadow[name] *= decay
        shadow[name] += (1.0 - decay) * np.asarray(value)
    return shadow


def _masked_mean(values: Tensor, mask: np.ndarray) -> Tensor:
    return ops.mul(ops.sum(ops.mul(values, mask.astype(np.float64))), 1.0 / np.count_nonzero(mask))


def _shadow_ce(
    student: StudentNet, shadow: dict[str, np.ndarray], z: np.ndarray, mask: np.ndarray, codebook: np.ndarray
) -> float:
    evaluated = copy.deepcopy(student)
    evaluated.load_state_dict(shadow)
    evaluated.freeze()
    ce = ops.cross_entropy(evaluated(z, mask, codebook), z).data
    return float(ce[mask].mean())


def pretrain(
    dataset: np.ndarray,
    tokenizer: Tokenizer,
    cfg: Stage2Config,
    prior_cfg: PriorConfig = PriorConfig(),
) -> tuple[StudentNet, TeacherNet, TrainHistory]:
    """
    Train the student to predict the tokens of masked patches.

    Per batch the teacher scores the raw patches, the strategy decides the
    final logits (random: zeros; static_prior: alpha * bias; adversarial:
    teacher logits; prior_guided: teacher logits + alpha * bias) and one
    Gumbel-Top-k mask per segment is drawn and span-repaired. The student
    minimizes the mean cross-entropy over masked positions. The teacher, when
    the strategy has one, receives each segment's mean masked cross-entropy
    as a detached reward and follows the batch-baselined score-function
    gradient. Both keep their own AdamW and schedule.

    Raises:
        FrozenViolation: The tokenizer still has trainable parameters.
        InvalidK: floor(ratio * N) is zero.
        EmptyDataset: No segments.
    """
    if not tokenizer.frozen:
        raise FrozenViolation("freeze the tokenizer before pretraining")
    net_cfg = tokenizer.net_cfg
    data = as_dataset(dataset, net_cfg.patch_T, net_cfg.seq_N)
    n_segments, n_patches, _ = data.shape
    k = cfg.policy.masked_count(n_patches)
    if k < 1:
        raise InvalidK(f"ratio {cfg.policy.ratio} masks no patch of {n_patches}")

    rng = np.random.default_rng(cfg.seed)
    student = StudentNet(net_cfg, rng)
    teacher = TeacherNet(net_cfg, rng)
    tokens = tokenizer.tokenize(data)
    codebook = tokenizer.codebook.vectors.data
    scores = score_segment(data, prior_cfg)
    bias = prior_bias(scores.s_prior, cfg.policy.std_floor)
    peak, flat = region_labels(scores, cfg.amp_threshold, cfg.skew_threshold)

    def optimizer(module: Module) -> AdamW:
        return AdamW(
            module.parameters(), lr=cfg.peak_lr, betas=cfg.betas, weight_decay=cfg.weight_decay, grad_clip=cfg.grad_clip
        )

    student_opt, teacher_opt = optimizer(student), optimizer(teacher)
    shadow = student.state_dict() if cfg.ema_decay is not None else None
    steps_per_epoch = n_batches(n_segments, cfg.batch_size)
    total_steps = cfg.epochs * steps_per_epoch
    warmup_steps = cfg.warmup_epochs * steps_per_epoch
    history = TrainHistory(stage="pretrain")
    step = 0
    for epoch in range(1, cfg.epochs + 1):
        counts = np.zeros((3, 2), dtype=np.int64)
        sums = dict.fromkeys(AVERAGED, 0.0)
        masked_scores: dict[str, list[np.ndarray]] = {"s_prior": [], "s_amp": [], "s_skew": []}
        incomplete = 0
        lr = cfg.peak_lr
        for batch_step, idx in enumerate(batch_indices(np.arange(n_segments), cfg.batch_size, rng)):
            x, z = data[idx], tokens[idx]
            policy_logits: Tensor | np.ndarray = teacher(x) if cfg.uses_teacher else np.zeros(z.shape)
            policy_logits = final_logits(policy_logits, bias[idx], cfg.bias_weight)
            logits_np = policy_logits.data if isinstance(policy_logits, Tensor) else policy_logits
            samples = sample_batch(logits_np, k, cfg.policy.max_span, cfg.seed, stream=(epoch, batch_step))
            mask = np.stack([s.mask for s in samples])
            incomplete += sum(not s.complete for s in samples)

            student_logits = student(z, mask, codebook)
            ce = ops.cross_entropy(student_logits, z)
            student_loss = _masked_mean(ce, mask)
            lr = cosine_schedule(step, total_steps, warmup_steps, cfg.peak_lr, cfg.min_lr)
            student.zero_grad()
            backward(student_loss)
            student_opt.step(lr)
            if shadow is not None:
                ema_update(shadow, student, cfg.ema_decay)

            rewards = (ce.data * mask).sum(axis=1) / mask.sum(axis=1)
            t_loss = 0.0
            if cfg.uses_teacher:
                orders = np.stack([s.order for s in samples])
                loss = teacher_loss(rewards, log_prob(policy_logits, orders))
                teacher.zero_grad()
                backward(loss)
                teacher_opt.step(lr)
                t_loss = loss.item()

            metrics = policy_metrics(logits_np, mask, t_loss)
            sums["student_ce"] += student_loss.item() * idx.size
            sums["teacher_loss"] += t_loss * idx.size
            sums["teacher_entropy"] += metrics.entropy * idx.size
            sums["teacher_prob_masked"] += (metrics.mean_prob_masked or 0.0) * idx.size
            sums["teacher_prob_all"] += metrics.mean_prob_all * idx.size
            counts += accuracy_counts(student_logits.data, z, mask, peak[idx], flat[idx])
            masked_scores["s_prior"].append(scores.s_prior[idx][mask])
            masked_scores["s_amp"].append(scores.s_amp[idx][mask])
            masked_scores["s_skew"].append(scores.s_skew[idx][mask])
            step += 1

        acc_all, acc_peak, acc_flat = _ratios(counts)
        row = {name: value / n_segments for name, value in sums.items()}
        row.update({f"masked_{name}": float(np.concatenate(parts).mean()) for name, parts in masked_scores.items()})
        if shadow is not None:
            row["ema_student_ce"] = _shadow_ce(student, shadow, z, mask, codebook)
        history.append(
            epoch, **row, acc_all=acc_all, acc_peak=acc_peak, acc_flat=acc_flat, incomplete_masks=incomplete, lr=lr
        )
        logger.info(
            "pretrain[%s] epoch %d/%d: CE=%.4f acc=%.3f entropy=%.4f",
            cfg.strategy,
            epoch,
            cfg.epochs,
            row["student_ce"],
            acc_all or 0.0,
            row["teacher_entropy"],
        )
    return student, teacher, history
