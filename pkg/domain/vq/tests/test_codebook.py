import numpy as np
import pytest
from scipy.spatial.distance import cdist

from domain.ndgrad import ops
from domain.ndgrad.gradcheck import check_gradients
from domain.ndgrad.tensor import Tensor, backward
from domain.vq.augment import PRESETS, AugmentConfig, augment
from domain.vq.codebook import Codebook, quantize, unused_codes
from domain.vq.errors import AugmentConfigError, DegenerateCodebook, ShapeError
from domain.vq.losses import consistency_loss, spectral_loss, vq_loss


def fixed_codebook(vectors: list[list[float]]) -> Codebook:
    book = Codebook(len(vectors), len(vectors[0]), np.random.default_rng(0))
    book.vectors.data[...] = np.array(vectors, dtype=float)
    return book


@pytest.mark.unit
class TestQuantize:
    def test_nearest_code(self) -> None:
        book = fixed_codebook([[0.0, 0.0], [1.0, 1.0]])
        assert quantize(np.array([[0.2, 0.1]]), book).indices[0] == 0

    def test_tie_goes_to_lowest_index(self) -> None:
        book = fixed_codebook([[0.0, 0.0], [1.0, 1.0]])
        assert quantize(np.array([[0.5, 0.5]]), book).indices[0] == 0

    def test_matches_brute_force(self) -> None:
        rng = np.random.default_rng(1)
        for _ in range(1000):
            K, D, N = rng.integers(2, 9), rng.integers(1, 5), rng.integers(1, 17)
            book = Codebook(int(K), int(D), rng, std=1.0)
            h = rng.normal(size=(N, D))
            result = book.quantize(h, track=False)
            explicit = np.array([[np.sum((row - code) ** 2) for code in book.vectors.data] for row in h])
            np.testing.assert_array_equal(result.indices, explicit.argmin(axis=1))
            np.testing.assert_array_equal(result.vectors, book.vectors.data[result.indices])

    def test_batched_shapes_and_distances(self) -> None:
        book = Codebook(5, 3, np.random.default_rng(2))
        h = np.random.default_rng(3).normal(size=(2, 4, 3))
        result = book.quantize(h, keep_distances=True)
        assert result.indices.shape == (2, 4)
        assert result.vectors.shape == (2, 4, 3)
        np.testing.assert_allclose(result.distances[1, 2], cdist(h[1, 2][None], book.vectors.data, "sqeuclidean")[0])

    def test_width_mismatch(self) -> None:
        with pytest.raises(ShapeError):
            quantize(np.zeros((3, 4)), Codebook(4, 3, np.random.default_rng(0)))

    def test_needs_two_codes(self) -> None:
        with pytest.raises(DegenerateCodebook):
            Codebook(1, 3, np.random.default_rng(0))


@pytest.mark.unit
class TestUsage:
    def test_histogram_counts(self) -> None:
        assert unused_codes(np.array([5, 0, 3])) == 1
        assert unused_codes(np.zeros(7, dtype=int)) == 7

    def test_latents_on_the_codes_use_every_code(self) -> None:
        book = fixed_codebook(np.eye(4).tolist())
        assert book.unused_codes() == 4
        book.quantize(np.eye(4))
        assert book.unused_codes() == 0
        book.reset_usage()
        assert book.unused_codes() == 4


@pytest.mark.unit
class TestLosses:
    def test_vq_loss_zero_when_equal(self) -> None:
        h = Tensor(np.ones((3, 2)))
        assert vq_loss(h, Tensor(np.ones((3, 2)))).item() == 0.0

    def test_vq_loss_is_quadratic(self) -> None:
        h = Tensor(np.zeros((3, 2)))
        one = vq_loss(h, Tensor(np.full((3, 2), 0.5))).item()
        two = vq_loss(h, Tensor(np.full((3, 2), 1.0))).item()
        assert two == pytest.approx(4 * one)

    def test_vq_loss_gradients(self) -> None:
        rng = np.random.default_rng(4)
        h = Tensor(rng.normal(size=(4, 3)), requires_grad=True)
        e = Tensor(rng.normal(size=(4, 3)), requires_grad=True)
        backward(vq_loss(h, e))
        np.testing.assert_allclose(h.grad, 2 * 0.25 * (h.data - e.data) / 12)
        np.testing.assert_allclose(e.grad, 2 * (e.data - h.data) / 12)

    def test_vq_loss_branches_match_finite_differences(self) -> None:
        rng = np.random.default_rng(5)
        h = Tensor(rng.normal(size=(4, 3)), requires_grad=True)
        e = rng.normal(size=(4, 3))
        assert check_gradients(lambda: vq_loss(h, Tensor(e)), [h], name="vq_loss").passed

    def test_consistency_gradient_only_on_augmented_branch(self) -> None:
        rng = np.random.default_rng(6)
        h_orig = Tensor(rng.normal(size=(5, 3)), requires_grad=True)
        h_aug = Tensor(rng.normal(size=(5, 3)), requires_grad=True)
        backward(consistency_loss(h_orig, h_aug), inputs=[h_orig, h_aug])
        assert np.all(h_orig.grad == 0.0)
        assert check_gradients(lambda: consistency_loss(Tensor(h_orig.data), h_aug), [h_aug]).passed

    def test_consistency_zero_for_identical(self) -> None:
        x = np.random.default_rng(7).normal(size=(2, 3))
        assert consistency_loss(Tensor(x), Tensor(x.copy())).item() == 0.0

    def test_spectral_loss(self) -> None:
        rng = np.random.default_rng(8)
        a = rng.uniform(size=(3, 26))
        b = rng.uniform(size=(3, 26))
        assert spectral_loss(Tensor(a), a).item() == 0.0
        assert spectral_loss(Tensor(a + 0.3), a).item() == pytest.approx(0.3)
        assert spectral_loss(Tensor(a), b).item() == pytest.approx(np.abs(a - b).sum() / a.size)

    def test_loss_shape_mismatch(self) -> None:
        with pytest.raises(ShapeError):
            spectral_loss(Tensor(np.zeros((2, 3))), np.zeros((3, 2)))

    def test_straight_through_contract_in_composed_loss(self) -> None:
        rng = np.random.default_rng(9)
        book = Codebook(6, 3, rng, std=1.0)
        h = Tensor(rng.normal(size=(1, 4, 3)), requires_grad=True)
        z = book.quantize(h).indices
        e_z = book.lookup(z)
        quantized = ops.straight_through(e_z.data, h)
        target = rng.uniform(size=(1, 4, 3))
        backward(spectral_loss(ops.softplus(quantized), target))
        via_ste = h.grad.copy()
        direct = Tensor(e_z.data.copy(), requires_grad=True)
        backward(spectral_loss(ops.softplus(direct), target))
        np.testing.assert_array_equal(via_ste, direct.grad)


@pytest.mark.unit
class TestAugment:
    def test_identity(self) -> None:
        x = np.random.default_rng(0).uniform(size=(4, 50))
        np.testing.assert_array_equal(augment(x, AugmentConfig(1.0, 1.0, 0.0), np.random.default_rng(1)), x)

    def test_seeded(self) -> None:
        x = np.linspace(0, 1, 50)
        cfg = AugmentConfig()
        first = augment(x, cfg, np.random.default_rng(3))
        np.testing.assert_array_equal(first, augment(x, cfg, np.random.default_rng(3)))

    def test_noise_level(self) -> None:
        out = augment(np.zeros(100_000), AugmentConfig(), np.random.default_rng(4))
        assert out.std() == pytest.approx(0.02, rel=0.02)

    def test_scale_bounds(self) -> None:
        out = augment(np.ones((1000, 5)), AugmentConfig(0.98, 1.02, 0.0), np.random.default_rng(5))
        assert out.min() >= 0.98 and out.max() <= 1.02
        assert np.all(out == out[:, :1])

    def test_presets_validate(self) -> None:
        assert PRESETS["combined_weak"] == AugmentConfig(0.98, 1.02, 0.02)
        with pytest.raises(AugmentConfigError):
            AugmentConfig(1.01, 1.05, 0.0)
        with pytest.raises(AugmentConfigError):
            AugmentConfig(noise_sigma=-0.1)
