import numpy as np
import pytest
from conftest import random_orthonormal

from flowspec import RsvdConfig, pca, sym_eig
from flowspec.linalg import gaussian_matrix
from flowspec.subspace import distance


def line_data():
    direction = np.array([1.0, 2.0, 2.0]) / 3.0
    return np.column_stack([t * direction for t in (-2.0, -1.0, 1.0, 2.0)])


class TestMeanCenter:
    def test_two_points(self):
        y = np.array([[1.0, 3.0], [1.0, 3.0]])
        x, mean = pca.mean_center(y)
        assert np.array_equal(mean, [2.0, 2.0])
        assert np.array_equal(x, [[-1.0, 1.0], [-1.0, 1.0]])

    def test_identical_columns(self):
        y = np.tile(np.arange(4.0)[:, None], (1, 5))
        x, _ = pca.mean_center(y)
        assert np.abs(x).max() == 0.0

    def test_recompute_mean_is_zero(self):
        y = gaussian_matrix(10, 50, 0)
        x, _ = pca.mean_center(y)
        assert np.abs(x.mean(axis=1)).max() <= 1e-12

    def test_single_column_rejected(self):
        with pytest.raises(ValueError, match="at least 2"):
            pca.mean_center(np.ones((3, 1)))


class TestFit:
    def test_line_through_origin(self):
        model = pca.fit(line_data(), q=1)
        direction = np.array([1.0, 2.0, 2.0]) / 3.0
        assert min(np.linalg.norm(model.components[:, 0] - direction),
                   np.linalg.norm(model.components[:, 0] + direction)) < 1e-8

    def test_full_rank_reconstruction(self):
        y = gaussian_matrix(5, 8, 1)
        model = pca.fit(y, q=min(5, 7), method="exact")
        for i in range(8):
            alpha = pca.project(model, y[:, i])
            assert np.linalg.norm(pca.reconstruct(model, alpha) - y[:, i]) < 1e-8

    def test_exact_vs_stochastic_subspace(self):
        # rank-8 signal plus mild noise in a frame-matrix shape
        u = random_orthonormal(400, 8, 0)
        coeff = gaussian_matrix(8, 450, 1) * np.array([10, 8, 6, 4, 2, 1, 0.5, 0.2])[:, None]
        y = u @ coeff + 0.01 * gaussian_matrix(400, 450, 2)
        exact = pca.fit(y, q=3, method="exact")
        stoch = pca.fit(y, q=3, method="stochastic",
                        cfg=RsvdConfig(target_rank=3, oversampling=10, seed=5))
        assert distance(exact.components, stoch.components) <= 0.15

    def test_q_out_of_range(self):
        y = gaussian_matrix(6, 4, 2)
        with pytest.raises(ValueError, match="out of range"):
            pca.fit(y, q=4)
        with pytest.raises(ValueError, match="out of range"):
            pca.fit(y, q=0)

    def test_stochastic_requires_cfg(self):
        with pytest.raises(ValueError, match="RsvdConfig"):
            pca.fit(gaussian_matrix(6, 5, 3), q=2, method="stochastic")

    def test_components_orthonormal(self):
        model = pca.fit(gaussian_matrix(12, 9, 4), q=4)
        gram = model.components.T @ model.components
        assert np.abs(gram - np.eye(4)).max() <= 1e-8


class TestProjectReconstruct:
    @pytest.fixture()
    def model(self):
        return pca.fit(gaussian_matrix(10, 20, 5), q=3)

    def test_project_mean_is_zero(self, model):
        assert np.abs(pca.project(model, model.mean)).max() < 1e-12

    def test_project_component_axis(self, model):
        y = model.mean + model.components[:, 0] * 2.5
        alpha = pca.project(model, y)
        assert abs(alpha[0] - 2.5) < 1e-10
        assert np.abs(alpha[1:]).max() < 1e-10

    def test_project_matches_v_factor(self):
        y = gaussian_matrix(12, 15, 6)
        x, _ = pca.mean_center(y)
        from flowspec import svd_exact
        res = svd_exact(x)
        model = pca.fit(y, q=4)
        for i in range(15):
            expected = res.v[i, :4] * res.sigma[:4]
            assert np.abs(pca.project(model, y[:, i]) - expected).max() < 1e-8

    def test_reconstruct_zero_gives_mean(self, model):
        assert np.array_equal(pca.reconstruct(model, np.zeros(3)), model.mean)

    def test_projection_identity_in_span(self, model):
        alpha = np.array([1.0, -2.0, 0.5])
        y = pca.reconstruct(model, alpha)
        assert np.abs(pca.project(model, y) - alpha).max() < 1e-8

    def test_residual_orthogonal_to_components(self, model):
        y = gaussian_matrix(10, 1, 7)[:, 0]
        resid = y - pca.reconstruct(model, pca.project(model, y))
        assert np.abs(model.components.T @ resid).max() < 1e-8

    def test_dimension_mismatch(self, model):
        with pytest.raises(ValueError):
            pca.project(model, np.zeros(7))
        with pytest.raises(ValueError):
            pca.reconstruct(model, np.zeros(5))


class TestExplainedVariance:
    def test_line_single_nonzero(self):
        model = pca.fit(line_data(), q=2)
        ev = pca.explained_variance(model)
        assert ev[0] > 1e-6
        assert ev[1] < 1e-12

    def test_isotropic_cloud(self):
        y = gaussian_matrix(5, 2000, 8)
        model = pca.fit(y, q=5)
        ev = pca.explained_variance(model)
        assert ev.max() / ev.min() < 1.2 / 0.8

    def test_matches_covariance_eigenvalues(self):
        y = gaussian_matrix(8, 30, 9)
        x, _ = pca.mean_center(y)
        model = pca.fit(y, q=5)
        cov_eigs = sym_eig(x @ x.T / (y.shape[1] - 1)).values[:5]
        ev = pca.explained_variance(model)
        assert np.abs(ev - cov_eigs).max() <= 1e-6 * cov_eigs[0]


class TestProperties:
    def test_eq4_equivalence(self):
        y = gaussian_matrix(9, 14, 10)
        x, _ = pca.mean_center(y)
        from flowspec import svd_exact
        sigma = svd_exact(x).sigma
        eigs = sym_eig(x @ x.T).values[:len(sigma)]
        mask = eigs > 1e-10 * eigs[0]
        rel = np.abs(sigma[mask] ** 2 - eigs[mask]) / eigs[0]
        assert rel.max() <= 1e-6

    def test_projection_is_contraction(self):
        model = pca.fit(gaussian_matrix(10, 12, 11), q=3)
        rng = np.random.default_rng(0)
        for _ in range(20):
            y1 = rng.standard_normal(10)
            y2 = rng.standard_normal(10)
            d_proj = np.linalg.norm(pca.project(model, y1) - pca.project(model, y2))
            assert d_proj <= np.linalg.norm(y1 - y2) + 1e-12

    def test_orthogonal_invariance(self):
        y = gaussian_matrix(7, 25, 12)
        rot = random_orthonormal(7, 7, 3)
        m1 = pca.fit(y, q=3, method="exact")
        m2 = pca.fit(rot @ y, q=3, method="exact")
        assert distance(rot @ m1.components, m2.components) <= 1e-6


class TestSerialization:
    def test_round_trip(self, tmp_path):
        y = gaussian_matrix(14, 10, 13)
        model = pca.fit(y, q=3, method="stochastic",
                        cfg=RsvdConfig(target_rank=3, oversampling=5, seed=21))
        path = tmp_path / "model.bin"
        pca.save_model(model, path)
        loaded = pca.load_model(path)
        assert np.array_equal(loaded.mean, model.mean)
        assert np.array_equal(loaded.sigma, model.sigma)
        assert np.array_equal(loaded.components, model.components)
        assert loaded.n_samples == model.n_samples
        assert loaded.method == "stochastic"
        assert loaded.seed == 21

    def test_bad_magic(self, tmp_path):
        y = gaussian_matrix(6, 8, 14)
        model = pca.fit(y, q=2)
        path = tmp_path / "model.bin"
        pca.save_model(model, path)
        raw = path.read_bytes()
        path.write_bytes(b"XXXXXXXX" + raw[8:])
        with pytest.raises(ValueError, match="magic"):
            pca.load_model(path)
