import numpy as np
import pytest

from asymscore.models import McmcConfig, TvpArSpec, fit_tvpar, predictive_draws
from asymscore.models.common import draw_inverse_wishart


def simulate_break(T, seed, early=0.9, late=0.15, sigma=0.7):
    """AR(1) whose slope jumps from `early` to `late` at mid sample."""
    rng = np.random.default_rng(seed)
    y = np.empty(T)
    y[0] = rng.standard_normal()
    for t in range(1, T):
        slope = early if t < T // 2 else late
        y[t] = slope * y[t - 1] + sigma * rng.standard_normal()
    return y


class TestTvpArSpec:
    def test_defaults(self):
        spec = TvpArSpec()
        assert spec.lags == 1
        assert spec.n_coeffs() == 2
        assert spec.omega_dof is None

    def test_validation(self):
        with pytest.raises(ValueError):
            TvpArSpec(lags=3)
        with pytest.raises(ValueError):
            TvpArSpec(state_cov=0.0)
        with pytest.raises(ValueError):
            TvpArSpec(omega_scale=-1.0)


class TestInverseWishart:
    def test_mean(self):
        rng = np.random.default_rng(40)
        scale = np.array([[2.0, 0.5], [0.5, 1.0]])
        dof = 8.0
        draws = np.array([draw_inverse_wishart(rng, scale, dof) for _ in range(8000)])
        expected = scale / (dof - scale.shape[0] - 1.0)
        np.testing.assert_allclose(draws.mean(axis=0), expected, rtol=0.08)

    def test_draws_are_spd(self):
        rng = np.random.default_rng(41)
        scale = np.eye(3) * 0.5
        for _ in range(50):
            om = draw_inverse_wishart(rng, scale, 7.0)
            np.testing.assert_allclose(om, om.T, atol=1e-12)
            assert np.all(np.linalg.eigvalsh(om) > 0)

    def test_dof_validation(self):
        rng = np.random.default_rng(42)
        with pytest.raises(ValueError):
            draw_inverse_wishart(rng, np.eye(2), 1.0)


class TestFitTvpar:
    def test_validation(self):
        with pytest.raises(ValueError):
            fit_tvpar(np.zeros((6, 2)))
        with pytest.raises(ValueError):
            fit_tvpar(np.ones(11))
        with pytest.raises(ValueError):
            fit_tvpar(np.array([np.nan] + [0.0] * 40))

    def test_deterministic_given_seed(self):
        y = simulate_break(80, 43)
        mcmc = McmcConfig(burn=20, keep=30, seed=3)
        a = fit_tvpar(y, mcmc=mcmc)
        b = fit_tvpar(y, mcmc=mcmc)
        np.testing.assert_array_equal(a.paths, b.paths)
        np.testing.assert_array_equal(a.sigma2, b.sigma2)
        np.testing.assert_array_equal(a.omegas, b.omegas)

    def test_shapes_and_invariants(self):
        y = simulate_break(100, 44)
        post = fit_tvpar(y, TvpArSpec(lags=2), mcmc=McmcConfig(burn=30, keep=40, seed=4))
        k = 3
        assert post.paths.shape == (40, y.size - 2, k)
        assert post.a_mats.shape == (40, k, k)
        assert post.omegas.shape == (40, k, k)
        assert post.sigma2.shape == (40,)
        assert np.all(post.sigma2 > 0)
        assert isinstance(post.flags["jittered_covariances"], int)
        for om in post.omegas[:10]:
            assert np.all(np.linalg.eigvalsh(om) > 0)

    def test_paths_track_coefficient_break(self):
        y = simulate_break(240, 45)
        post = fit_tvpar(y, mcmc=McmcConfig(burn=150, keep=200, seed=5))
        slope_path = post.paths[:, :, 1].mean(axis=0)
        T_eff = slope_path.size
        early = slope_path[: T_eff // 4].mean()
        late = slope_path[3 * T_eff // 4 :].mean()
        assert early > 0.6
        assert late < 0.4


def test_predictive_draws_from_tvp_posterior():
    y = simulate_break(160, 46)
    post = fit_tvpar(y, mcmc=McmcConfig(burn=60, keep=120, seed=6))
    a = predictive_draws(post, None, 2, 400, seed=51)
    b = predictive_draws(post, None, 2, 400, seed=51)
    np.testing.assert_array_equal(a, b)
    assert a.shape == (400,)
    assert np.all(np.isfinite(a))
