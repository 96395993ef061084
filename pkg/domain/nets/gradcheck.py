"""
Finite-difference checks of the four networks, end to end, at micro scale.
"""

from __future__ import annotations

import numpy as np

from domain.ndgrad import ops
from domain.ndgrad.gradcheck import GradCheckResult, check_gradients
from domain.ndgrad.tensor import Tensor

from .definitions import NetConfig
from .models import StudentNet, TeacherNet, TokenizerDecoder, TokenizerEncoder

# two patches of six samples; every parameter tensor stays small enough for
# central differences over each entry
MICRO = NetConfig(
    conv_channels=(1, 2),
    conv_kernels=(3,),
    conv_strides=(2,),
    conv_paddings=(1,),
    n_encoder_layers=1,
    n_decoder_layers=1,
    student_layers=1,
    teacher_layers=1,
    hidden=4,
    mlp=8,
    heads=2,
    teacher_hidden=4,
    teacher_mlp=8,
    teacher_heads=2,
    codebook_K=4,
    codebook_D=3,
    patch_T=6,
    seq_N=2,
    init_std=0.5,
)


def _encoder_check(rng: np.random.Generator) -> GradCheckResult:
    encoder = TokenizerEncoder(MICRO, rng)
    patches = rng.uniform(size=(1, MICRO.seq_N, MICRO.patch_T))
    weights = rng.normal(size=(1, MICRO.seq_N, MICRO.codebook_D))
    return check_gradients(
        lambda: ops.sum(ops.mul(encoder(patches), Tensor(weights))),
        list(encoder.parameters().values()),
        name="tokenizer_encoder",
    )


def _decoder_check(rng: np.random.Generator) -> GradCheckResult:
    decoder = TokenizerDecoder(MICRO, rng, targets=("amplitude", "phase"))
    codes = Tensor(rng.normal(size=(1, MICRO.seq_N, MICRO.codebook_D)), requires_grad=True)
    target = rng.uniform(size=(1, MICRO.seq_N, MICRO.patch_T // 2 + 1))

    def loss() -> Tensor:
        out = decoder(codes)
        return ops.add(
            ops.mean(ops.square(ops.sub(out["amplitude"], target))),
            ops.mean(ops.square(out["phase"])),
        )

    return check_gradients(loss, list(decoder.parameters().values()) + [codes], name="tokenizer_decoder")


def _student_check(rng: np.random.Generator) -> GradCheckResult:
    student = StudentNet(MICRO, rng)
    ids = rng.integers(0, MICRO.codebook_K, size=(1, MICRO.seq_N))
    mask = np.array([[True, False]])
    return check_gradients(
        lambda: ops.mean(ops.cross_entropy(student(ids, mask), ids)),
        list(student.parameters().values()),
        name="student",
    )


def _teacher_check(rng: np.random.Generator) -> GradCheckResult:
    teacher = TeacherNet(MICRO, rng)
    patches = rng.uniform(size=(2, MICRO.seq_N, MICRO.patch_T))
    weights = rng.normal(size=(2, MICRO.seq_N))
    return check_gradients(
        lambda: ops.sum(ops.mul(teacher(patches), Tensor(weights))),
        list(teacher.parameters().values()),
        name="teacher",
    )


def network_suite(seed: int = 0) -> list[GradCheckResult]:
    """Gradient-check the tokenizer encoder and decoder, the student and the teacher."""
    checks = (_encoder_check, _decoder_check, _student_check, _teacher_check)
    return [check(np.random.default_rng([seed, i])) for i, check in enumerate(checks)]
