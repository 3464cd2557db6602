"""Shared pieces of the Bayesian forecasting models: priors, MCMC
configuration, design-matrix construction and conjugate-update helpers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "NigPrior",
    "McmcConfig",
    "build_design",
    "GaussianConditional",
    "draw_inverse_gamma",
    "draw_inverse_wishart",
]


@dataclass(frozen=True)
class NigPrior:
    """Independent normal prior on coefficients, inverse-gamma on the
    innovation variance.

    ``coeff_mean`` and ``coeff_cov`` may be scalars (broadcast to the
    coefficient dimension, the covariance as a multiple of the
    identity) or full arrays.  The inverse-gamma is parameterized by
    shape and rate, so its mean is ``rate / (shape - 1)`` for shape > 1.
    """

    coeff_mean: float | np.ndarray = 0.0
    coeff_cov: float | np.ndarray = 10.0
    sigma_shape: float = 2.0
    sigma_rate: float = 2.0

    def __post_init__(self):
        if not (np.isfinite(self.sigma_shape) and self.sigma_shape > 0.0):
            raise ValueError(f"sigma_shape must be positive, got {self.sigma_shape!r}")
        if not (np.isfinite(self.sigma_rate) and self.sigma_rate > 0.0):
            raise ValueError(f"sigma_rate must be positive, got {self.sigma_rate!r}")

    def resolve(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        """Coefficient prior mean vector and covariance matrix for dimension `k`."""
        mean = np.asarray(self.coeff_mean, dtype=float)
        if mean.ndim == 0:
            mean = np.full(k, float(mean))
        if mean.shape != (k,):
            raise ValueError(f"coeff_mean has shape {mean.shape}, expected ({k},)")
        cov = np.asarray(self.coeff_cov, dtype=float)
        if cov.ndim == 0:
            cov = np.eye(k) * float(cov)
        if cov.shape != (k, k):
            raise ValueError(f"coeff_cov has shape {cov.shape}, expected ({k}, {k})")
        if not np.all(np.isfinite(mean)) or not np.all(np.isfinite(cov)):
            raise ValueError("prior moments must be finite")
        return mean, cov


@dataclass(frozen=True)
class McmcConfig:
    """Gibbs sampler budget: `burn` discarded sweeps, then `keep` draws
    retained every `thin`-th sweep.  `seed` makes the run reproducible."""

    burn: int = 1000
    keep: int = 2000
    thin: int = 1
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.burn, (int, np.integer)) or self.burn < 0:
            raise ValueError(f"burn must be a non-negative integer, got {self.burn!r}")
        if not isinstance(self.keep, (int, np.integer)) or self.keep < 1:
            raise ValueError(f"keep must be a positive integer, got {self.keep!r}")
        if not isinstance(self.thin, (int, np.integer)) or self.thin < 1:
            raise ValueError(f"thin must be a positive integer, got {self.thin!r}")


def build_design(y: np.ndarray, lags: tuple[int, ...], intercept: bool) -> tuple[np.ndarray, np.ndarray]:
    """Regressor matrix and aligned target for an autoregression.

    Columns are the intercept (if any) followed by ``y[t - l]`` for
    each lag ``l`` in order.  Rows start at ``t = max(lags)`` so every
    lag is observed.
    """
    y = np.asarray(y, dtype=float)
    p = max(lags) if lags else 0
    y_eff = y[p:]
    cols = []
    if intercept:
        cols.append(np.ones(y_eff.size))
    for lag in lags:
        cols.append(y[p - lag : y.size - lag])
    if not cols:
        raise ValueError("model has no regressors; enable the intercept or add lags")
    return np.column_stack(cols), y_eff


class GaussianConditional:
    """Conjugate Gaussian update for regression coefficients.

    Holds the prior precision (factored once) and produces draws from
    ``N(Vbar @ (prior_prec @ prior_mean + Xty / s2), Vbar)`` with
    ``Vbar = (prior_prec + XtX / s2)^{-1}``.
    """

    def __init__(self, prior_mean: np.ndarray, prior_cov: np.ndarray):
        self.prior_mean = prior_mean
        try:
            cov_chol = np.linalg.cholesky(prior_cov)
        except np.linalg.LinAlgError as exc:
            raise np.linalg.LinAlgError("prior covariance is not positive definite") from exc
        eye = np.eye(prior_cov.shape[0])
        inv_chol = np.linalg.solve(cov_chol, eye)
        self.prior_prec = inv_chol.T @ inv_chol
        self.prec_mean = self.prior_prec @ prior_mean

    def draw(self, xtx: np.ndarray, xty: np.ndarray, sigma2: float, z: np.ndarray) -> np.ndarray:
        """One draw given sufficient statistics and a standard normal vector `z`."""
        prec = self.prior_prec + xtx / sigma2
        try:
            L = np.linalg.cholesky(prec)
        except np.linalg.LinAlgError as exc:
            raise np.linalg.LinAlgError(
                "posterior precision is not positive definite; the regressor "
                "matrix is likely rank-deficient"
            ) from exc
        mean = np.linalg.solve(L.T, np.linalg.solve(L, self.prec_mean + xty / sigma2))
        return mean + np.linalg.solve(L.T, z)

    def prior_draw(self, z: np.ndarray) -> np.ndarray:
        """Draw straight from the prior (used when a regime has no data)."""
        return self.draw(np.zeros_like(self.prior_prec), np.zeros_like(self.prec_mean), 1.0, z)


def draw_inverse_gamma(rng: np.random.Generator, shape: float, rate: float) -> float:
    """One inverse-gamma draw in the shape/rate parameterization."""
    return 1.0 / rng.gamma(shape, 1.0 / rate)


def draw_inverse_wishart(rng: np.random.Generator, scale: np.ndarray, dof: float) -> np.ndarray:
    """One inverse-Wishart draw via the Bartlett decomposition.

    `scale` is the scale matrix (prior sum of squares); `dof` must
    exceed ``k - 1``.  The mean is ``scale / (dof - k - 1)`` when that
    is defined.
    """
    k = scale.shape[0]
    if dof <= k - 1:
        raise ValueError(f"inverse-Wishart needs dof > k - 1, got dof={dof!r} with k={k}")
    scale_chol = np.linalg.cholesky(scale)
    # Wishart(scale^{-1}, dof) via Bartlett: X = L W W' L' with L = chol(scale^{-1})
    chi = np.sqrt(rng.chisquare(dof - np.arange(k)))
    W = np.zeros((k, k))
    W[np.diag_indices(k)] = chi
    if k > 1:
        W[np.tril_indices(k, -1)] = rng.standard_normal(k * (k - 1) // 2)
    # L = chol(scale^{-1}) satisfies L = (scale_chol^{-T}); build L W without inverting twice
    LW = np.linalg.solve(scale_chol.T, W)
    wish = LW @ LW.T
    out = np.linalg.inv(wish)
    return 0.5 * (out + out.T)
