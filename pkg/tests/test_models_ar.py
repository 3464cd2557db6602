import numpy as np
import pytest

from asymscore.models import ArSpec, McmcConfig, NigPrior, fit_ar, predictive_draws
from asymscore.models.common import GaussianConditional, build_design, draw_inverse_gamma


def simulate_ar1(T, intercept, slope, sigma, seed):
    rng = np.random.default_rng(seed)
    y = np.empty(T)
    y[0] = intercept / (1.0 - slope)
    for t in range(1, T):
        y[t] = intercept + slope * y[t - 1] + sigma * rng.standard_normal()
    return y


class TestArSpec:
    def test_integer_lags_expand_to_range(self):
        assert ArSpec(lags=3).lag_tuple() == (1, 2, 3)
        assert ArSpec(lags=0).lag_tuple() == ()

    def test_explicit_lags_are_sorted(self):
        assert ArSpec(lags=(4, 1)).lag_tuple() == (1, 4)
        assert ArSpec(lags=()).lag_tuple() == ()

    def test_invalid_lags(self):
        with pytest.raises(ValueError):
            ArSpec(lags=-1).lag_tuple()
        with pytest.raises(ValueError):
            ArSpec(lags=(0, 1)).lag_tuple()
        with pytest.raises(ValueError):
            ArSpec(lags=(2, 2)).lag_tuple()

    def test_n_coeffs(self):
        assert ArSpec(lags=2).n_coeffs() == 3
        assert ArSpec(lags=0).n_coeffs() == 1
        with pytest.raises(ValueError):
            ArSpec(lags=0, intercept=False).n_coeffs()


class TestBuildDesign:
    def test_alignment(self):
        y = np.arange(10.0)
        X, y_eff = build_design(y, (1, 3), True)
        assert X.shape == (7, 3)
        np.testing.assert_array_equal(y_eff, y[3:])
        np.testing.assert_array_equal(X[:, 0], np.ones(7))
        np.testing.assert_array_equal(X[:, 1], y[2:-1])
        np.testing.assert_array_equal(X[:, 2], y[:-3])

    def test_white_noise_design(self):
        y = np.arange(5.0)
        X, y_eff = build_design(y, (), True)
        np.testing.assert_array_equal(X, np.ones((5, 1)))
        np.testing.assert_array_equal(y_eff, y)


class TestGaussianConditional:
    def test_zero_shock_draw_is_exact_posterior_mean(self):
        rng = np.random.default_rng(0)
        X = rng.standard_normal((60, 3))
        y = X @ np.array([0.5, -1.0, 2.0]) + 0.4 * rng.standard_normal(60)
        prior_mean = np.zeros(3)
        prior_cov = np.eye(3) * 10.0
        cond = GaussianConditional(prior_mean, prior_cov)
        s2 = 0.16
        draw = cond.draw(X.T @ X, X.T @ y, s2, np.zeros(3))
        v_post = np.linalg.inv(np.linalg.inv(prior_cov) + X.T @ X / s2)
        mu_post = v_post @ (np.linalg.inv(prior_cov) @ prior_mean + X.T @ y / s2)
        np.testing.assert_allclose(draw, mu_post, rtol=1e-10, atol=1e-12)

    def test_draw_covariance_matches_posterior(self):
        rng = np.random.default_rng(1)
        X = rng.standard_normal((40, 2))
        y = rng.standard_normal(40)
        cond = GaussianConditional(np.zeros(2), np.eye(2) * 4.0)
        s2 = 1.0
        v_post = np.linalg.inv(np.eye(2) / 4.0 + X.T @ X / s2)
        zs = rng.standard_normal((20_000, 2))
        draws = np.array([cond.draw(X.T @ X, X.T @ y, s2, z) for z in zs])
        np.testing.assert_allclose(np.cov(draws.T), v_post, atol=0.01)

    def test_prior_draw(self):
        cond = GaussianConditional(np.array([1.0, -1.0]), np.diag([4.0, 9.0]))
        np.testing.assert_allclose(cond.prior_draw(np.zeros(2)), [1.0, -1.0])
        np.testing.assert_allclose(cond.prior_draw(np.array([1.0, 1.0])), [3.0, 2.0])


def test_inverse_gamma_moments():
    rng = np.random.default_rng(2)
    shape, rate = 5.0, 8.0
    draws = np.array([draw_inverse_gamma(rng, shape, rate) for _ in range(40_000)])
    assert draws.mean() == pytest.approx(rate / (shape - 1.0), rel=0.03)
    assert np.all(draws > 0)


class TestFitAr:
    def test_validation(self):
        with pytest.raises(ValueError):
            fit_ar(np.zeros((5, 2)))
        with pytest.raises(ValueError):
            fit_ar(np.ones(11), ArSpec(lags=1))
        with pytest.raises(ValueError):
            fit_ar(np.array([1.0, np.nan] * 20))

    def test_deterministic_given_seed(self):
        y = simulate_ar1(80, 0.4, 0.6, 1.0, 3)
        mcmc = McmcConfig(burn=50, keep=100, seed=9)
        a = fit_ar(y, mcmc=mcmc)
        b = fit_ar(y, mcmc=mcmc)
        np.testing.assert_array_equal(a.coeffs, b.coeffs)
        np.testing.assert_array_equal(a.sigma2, b.sigma2)
        c = fit_ar(y, mcmc=McmcConfig(burn=50, keep=100, seed=10))
        assert not np.array_equal(a.coeffs, c.coeffs)

    def test_bookkeeping(self):
        y = simulate_ar1(60, 0.0, 0.5, 1.0, 4)
        post = fit_ar(y, ArSpec(lags=2), mcmc=McmcConfig(burn=10, keep=25, thin=3, seed=0))
        assert post.n_kept == 25
        assert post.coeffs.shape == (25, 3)
        assert post.sigma2.shape == (25,)
        assert np.all(post.sigma2 > 0)
        np.testing.assert_array_equal(post.history, y[-2:])
        assert post.n_obs == 60

    def test_posterior_concentrates_on_truth(self):
        y = simulate_ar1(800, 0.4, 0.6, 1.0, 5)
        post = fit_ar(y, mcmc=McmcConfig(burn=200, keep=400, seed=1))
        intercept, slope = post.coeffs.mean(axis=0)
        assert slope == pytest.approx(0.6, abs=0.08)
        assert intercept == pytest.approx(0.4, abs=0.15)
        assert post.sigma2.mean() == pytest.approx(1.0, rel=0.15)

    def test_white_noise_model_recovers_mean(self):
        rng = np.random.default_rng(6)
        y = 2.5 + rng.standard_normal(300)
        post = fit_ar(y, ArSpec(lags=0), mcmc=McmcConfig(burn=100, keep=200, seed=2))
        assert post.coeffs.shape == (200, 1)
        assert post.coeffs.mean() == pytest.approx(y.mean(), abs=0.1)

    def test_tight_prior_shrinks_posterior(self):
        y = simulate_ar1(200, 0.4, 0.6, 1.0, 7)
        tight = NigPrior(coeff_mean=0.0, coeff_cov=1e-6)
        post = fit_ar(y, prior=tight, mcmc=McmcConfig(burn=100, keep=200, seed=3))
        assert np.abs(post.coeffs.mean(axis=0)).max() < 0.01


class TestPredictiveDraws:
    def setup_method(self):
        y = simulate_ar1(400, 0.4, 0.6, 0.5, 8)
        self.post = fit_ar(y, mcmc=McmcConfig(burn=200, keep=500, seed=4))

    def test_deterministic(self):
        a = predictive_draws(self.post, None, 1, 300, seed=11)
        b = predictive_draws(self.post, None, 1, 300, seed=11)
        np.testing.assert_array_equal(a, b)
        assert a.shape == (300,)

    def test_one_step_location(self):
        hist = np.array([2.0])
        draws = predictive_draws(self.post, hist, 1, 4000, seed=12)
        assert draws.mean() == pytest.approx(0.4 + 0.6 * 2.0, abs=0.1)

    def test_uncertainty_grows_with_horizon(self):
        d1 = predictive_draws(self.post, None, 1, 4000, seed=13)
        d5 = predictive_draws(self.post, None, 5, 4000, seed=13)
        assert d5.var() > d1.var()

    def test_more_draws_than_kept_resamples(self):
        d = predictive_draws(self.post, None, 1, 2000, seed=14)
        assert d.shape == (2000,)
        assert np.all(np.isfinite(d))

    def test_short_history_rejected(self):
        y = simulate_ar1(60, 0.0, 0.5, 1.0, 9)
        post2 = fit_ar(y, ArSpec(lags=2), mcmc=McmcConfig(burn=20, keep=30, seed=5))
        with pytest.raises(ValueError):
            predictive_draws(post2, np.array([1.0]), 1, 10, seed=0)

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            predictive_draws(self.post, None, 0, 10, seed=0)
        with pytest.raises(ValueError):
            predictive_draws(self.post, None, 1, 0, seed=0)
        with pytest.raises(TypeError):
            predictive_draws(object(), None, 1, 10, seed=0)
