import numpy as np
import pytest

from domain.ndgrad import ops
from domain.ndgrad.gradcheck import check_gradients
from domain.ndgrad.optim import AdamW
from domain.ndgrad.tensor import Tensor, backward
from domain.nets.definitions import LARGE_BASE, NetConfig
from domain.nets.errors import NetConfigError, ShapeError, TokenRange
from domain.nets.gradcheck import MICRO, network_suite
from domain.nets.models import StudentNet, TeacherNet, TokenizerDecoder, TokenizerEncoder

SMALL = NetConfig(seq_N=8, hidden=16, mlp=32, heads=2, codebook_K=8, codebook_D=4, teacher_hidden=16, teacher_mlp=32)


def linear(n_in: int, n_out: int) -> int:
    return n_in * n_out + n_out


def stack(layers: int, hidden: int, mlp: int) -> int:
    block = 4 * linear(hidden, hidden) + linear(hidden, mlp) + linear(mlp, hidden) + 4 * hidden
    return layers * block + 2 * hidden


def conv_embed(cfg: NetConfig, hidden: int) -> int:
    channels = cfg.conv_channels
    convs = sum(channels[i + 1] * channels[i] * k + channels[i + 1] for i, k in enumerate(cfg.conv_kernels))
    return convs + linear(channels[-1] * cfg.conv_out_len(), hidden)


def encoder_count(cfg: NetConfig) -> int:
    return (
        conv_embed(cfg, cfg.hidden)
        + cfg.seq_N * cfg.hidden
        + stack(cfg.n_encoder_layers, cfg.hidden, cfg.mlp)
        + linear(cfg.hidden, cfg.codebook_D)
    )


def teacher_count(cfg: NetConfig) -> int:
    return (
        conv_embed(cfg, cfg.teacher_hidden)
        + cfg.seq_N * cfg.teacher_hidden
        + stack(cfg.teacher_layers, cfg.teacher_hidden, cfg.teacher_mlp)
        + linear(cfg.teacher_hidden, 1)
    )


@pytest.mark.unit
class TestParameterCounts:
    def test_encoder_matches_formula(self) -> None:
        for cfg in (NetConfig(), SMALL, MICRO):
            assert TokenizerEncoder(cfg, np.random.default_rng(0)).num_parameters() == encoder_count(cfg)

    def test_decoder_matches_formula(self) -> None:
        cfg = NetConfig()
        decoder = TokenizerDecoder(cfg, np.random.default_rng(0), targets=("amplitude", "raw"))
        expected = (
            linear(cfg.codebook_D, cfg.hidden)
            + cfg.seq_N * cfg.hidden
            + stack(cfg.n_decoder_layers, cfg.hidden, cfg.mlp)
            + linear(cfg.hidden, 26)
            + linear(cfg.hidden, 50)
        )
        assert decoder.num_parameters() == expected

    def test_student_matches_formula(self) -> None:
        cfg = NetConfig()
        expected = (
            (cfg.codebook_K + 1) * cfg.hidden
            + cfg.seq_N * cfg.hidden
            + stack(cfg.student_layers, cfg.hidden, cfg.mlp)
            + linear(cfg.hidden, cfg.codebook_K)
        )
        assert StudentNet(cfg, np.random.default_rng(0)).num_parameters() == expected

    def test_teacher_is_small(self) -> None:
        for cfg in (NetConfig(), LARGE_BASE):
            count = TeacherNet(cfg, np.random.default_rng(0)).num_parameters()
            assert count == teacher_count(cfg)
            assert count < 100_000

    @pytest.mark.slow
    def test_large_scale_encoder(self) -> None:
        count = TokenizerEncoder(LARGE_BASE, np.random.default_rng(0)).num_parameters()
        assert count == encoder_count(LARGE_BASE)
        assert abs(count - 5.8e6) <= 0.2 * 5.8e6


@pytest.mark.unit
class TestForward:
    def test_encode_zero_input_is_finite_and_seeded(self) -> None:
        patches = np.zeros((2, 8, 50))
        first = TokenizerEncoder(SMALL, np.random.default_rng(1))(patches).data
        second = TokenizerEncoder(SMALL, np.random.default_rng(1))(patches).data
        assert first.shape == (2, 8, 4)
        assert np.all(np.isfinite(first))
        assert first.tobytes() == second.tobytes()

    def test_positions_separate_identical_patches(self) -> None:
        patches = np.tile(np.linspace(0.0, 1.0, 50), (8, 1))
        latents = TokenizerEncoder(SMALL, np.random.default_rng(2))(patches).data[0]
        assert not np.allclose(latents[0], latents[5])

    def test_forward_passes_are_finite_on_unit_inputs(self) -> None:
        rng = np.random.default_rng(3)
        patches = rng.uniform(size=(3, 8, 50))
        latents = TokenizerEncoder(SMALL, rng)(patches)
        spectra = TokenizerDecoder(SMALL, rng)(latents)["amplitude"].data
        logits = TeacherNet(SMALL, rng)(patches).data
        assert spectra.shape == (3, 8, 26)
        assert np.all(spectra >= 0.0)
        assert logits.shape == (3, 8)
        assert np.all(np.isfinite(logits))

    def test_decoder_rejects_wrong_width(self) -> None:
        with pytest.raises(ShapeError):
            TokenizerDecoder(SMALL, np.random.default_rng(0))(Tensor(np.zeros((1, 8, 5))))

    def test_unknown_target(self) -> None:
        with pytest.raises(NetConfigError):
            TokenizerDecoder(SMALL, np.random.default_rng(0), targets=("wavelet",))

    def test_student_rejects_out_of_range_ids(self) -> None:
        student = StudentNet(SMALL, np.random.default_rng(0))
        with pytest.raises(TokenRange):
            student(np.array([[0, 8, 1, 1, 1, 1, 1, 1]]))

    def test_all_masked_input_ignores_ids(self) -> None:
        student = StudentNet(SMALL, np.random.default_rng(4))
        mask = np.ones((1, 8), dtype=bool)
        a = student(np.zeros((1, 8), dtype=int), mask).data
        b = student(np.arange(8)[None, :], mask).data
        np.testing.assert_array_equal(a, b)

    def test_tied_embeddings_read_the_codebook(self) -> None:
        cfg = SMALL.with_overrides(tie_embeddings=True)
        student = StudentNet(cfg, np.random.default_rng(5))
        codebook = np.random.default_rng(6).normal(size=(8, 4))
        logits = student(np.arange(8)[None, :], codebook=codebook)
        assert logits.shape == (1, 8, 8)
        with pytest.raises(NetConfigError):
            student(np.arange(8)[None, :])

    def test_teacher_permutes_with_the_batch(self) -> None:
        teacher = TeacherNet(SMALL, np.random.default_rng(7))
        patches = np.random.default_rng(8).uniform(size=(3, 8, 50))
        out = teacher(patches).data
        np.testing.assert_allclose(teacher(patches[[2, 0, 1]]).data, out[[2, 0, 1]], rtol=0, atol=1e-12)

    def test_config_validation(self) -> None:
        with pytest.raises(NetConfigError):
            NetConfig(hidden=10, heads=4)
        with pytest.raises(NetConfigError):
            NetConfig(codebook_K=1)


@pytest.mark.unit
class TestMicroGradients:
    """End-to-end finite-difference checks on a two-patch network."""

    def test_encoder(self) -> None:
        encoder = TokenizerEncoder(MICRO, np.random.default_rng(0))
        patches = np.random.default_rng(1).uniform(size=(1, 2, 6))
        weights = np.random.default_rng(2).normal(size=(1, 2, 3))
        result = check_gradients(
            lambda: ops.sum(ops.mul(encoder(patches), Tensor(weights))),
            list(encoder.parameters().values()),
        )
        assert result.passed, result

    def test_decoder(self) -> None:
        decoder = TokenizerDecoder(MICRO, np.random.default_rng(3), targets=("amplitude", "phase"))
        codes = Tensor(np.random.default_rng(4).normal(size=(1, 2, 3)), requires_grad=True)
        target = np.random.default_rng(5).uniform(size=(1, 2, 4))

        def loss() -> Tensor:
            out = decoder(codes)
            return ops.add(
                ops.mean(ops.square(ops.sub(out["amplitude"], target))),
                ops.mean(ops.square(out["phase"])),
            )

        result = check_gradients(loss, list(decoder.parameters().values()) + [codes])
        assert result.passed, result

    def test_student(self) -> None:
        student = StudentNet(MICRO, np.random.default_rng(6))
        ids = np.array([[1, 3]])
        mask = np.array([[True, False]])
        result = check_gradients(
            lambda: ops.mean(ops.cross_entropy(student(ids, mask), ids)),
            list(student.parameters().values()),
        )
        assert result.passed, result

    def test_teacher(self) -> None:
        teacher = TeacherNet(MICRO, np.random.default_rng(7))
        patches = np.random.default_rng(8).uniform(size=(2, 2, 6))
        weights = np.array([[0.3, -1.2], [0.7, 0.1]])
        result = check_gradients(
            lambda: ops.sum(ops.mul(teacher(patches), Tensor(weights))),
            list(teacher.parameters().values()),
        )
        assert result.passed, result

    @pytest.mark.parametrize("seed", [0, 4])
    def test_network_suite(self, seed: int) -> None:
        results = network_suite(seed)
        assert [r.name for r in results] == ["tokenizer_encoder", "tokenizer_decoder", "student", "teacher"]
        assert [r.name for r in results if not r.passed] == []


@pytest.mark.unit
def test_student_learns_a_constant_corpus() -> None:
    cfg = NetConfig(seq_N=4, hidden=8, mlp=16, heads=2, codebook_K=2, codebook_D=2, student_layers=1)
    student = StudentNet(cfg, np.random.default_rng(0))
    optimizer = AdamW(student.parameters(), lr=0.05)
    rng = np.random.default_rng(1)
    ids = np.ones((8, 4), dtype=int)
    for _ in range(40):
        mask = rng.uniform(size=(8, 4)) < 0.5
        mask[:, 0] = True
        optimizer.zero_grad()
        ce = ops.cross_entropy(student(ids, mask), ids)
        backward(ops.mean(ops.mul(ce, mask.astype(float))))
        optimizer.step()
    mask = np.array([[True, False, True, False]])
    logits = student(np.ones((1, 4), dtype=int), mask).data
    assert np.all(logits[0, mask[0]].argmax(axis=-1) == 1)
