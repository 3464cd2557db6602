"""Autoregression with time-varying coefficients.

Observation equation ``y_t = x_t' beta_t + eps_t`` with
``x_t = (1, y_{t-1}, ...)``, state equation
``beta_t = A beta_{t-1} + eta_t`` with ``eta_t ~ N(0, Omega)``.  A
Gibbs sweep draws the full coefficient path by Kalman forward
filtering and backward sampling, then the transition matrix column by
column from its Gaussian conditional, the state innovation covariance
from an inverse-Wishart, and the observation variance from an
inverse-gamma.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from asymscore import _kernels
from asymscore.models.common import (
    McmcConfig,
    build_design,
    draw_inverse_gamma,
    draw_inverse_wishart,
)

__all__ = ["TvpArSpec", "TvpArPosterior", "fit_tvpar"]


@dataclass(frozen=True)
class TvpArSpec:
    """Lag order and priors of the time-varying-coefficient model.

    ``state_mean``/``state_cov`` describe the first coefficient vector
    before any data; ``a_mean_diag``/``a_cov`` give each column of the
    transition matrix a normal prior centered on a persistent diagonal;
    ``omega_scale``/``omega_dof`` set the inverse-Wishart on the state
    innovation covariance (scalar scale means that multiple of the
    identity); ``sigma_shape``/``sigma_rate`` the inverse-gamma on the
    observation variance.
    """

    lags: int = 1
    state_mean: float = 0.0
    state_cov: float = 10.0
    a_mean_diag: float = 0.9
    a_cov: float = 0.25
    omega_scale: float = 0.03
    omega_dof: float | None = None
    sigma_shape: float = 2.0
    sigma_rate: float = 2.0

    def __post_init__(self):
        if self.lags not in (1, 2):
            raise ValueError(f"lags must be 1 or 2, got {self.lags!r}")
        for name in ("state_cov", "a_cov", "omega_scale", "sigma_shape", "sigma_rate"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be positive, got {v!r}")

    def n_coeffs(self) -> int:
        return 1 + self.lags


@dataclass
class TvpArPosterior:
    """Kept draws: coefficient paths ``(keep, T_eff, k)``, transition
    matrices ``(keep, k, k)``, state innovation covariances
    ``(keep, k, k)`` and observation variances ``(keep,)``."""

    spec: TvpArSpec
    paths: np.ndarray
    a_mats: np.ndarray
    omegas: np.ndarray
    sigma2: np.ndarray
    history: np.ndarray
    n_obs: int
    seed: int
    flags: dict = field(default_factory=dict)

    @property
    def n_kept(self) -> int:
        return self.paths.shape[0]


def fit_tvpar(y, spec: TvpArSpec = TvpArSpec(), mcmc: McmcConfig = McmcConfig()) -> TvpArPosterior:
    """Gibbs sampler for the time-varying-coefficient autoregression.

    ``flags['jittered_covariances']`` counts backward-pass conditional
    covariances that needed diagonal jitter to stay positive definite.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if not np.all(np.isfinite(y)):
        raise ValueError("series must be finite")
    if y.size <= spec.lags + 10:
        raise ValueError(
            f"series of length {y.size} is too short for lag order {spec.lags}; need at least {spec.lags + 11}"
        )

    lags = tuple(range(1, spec.lags + 1))
    X, y_eff = build_design(y, lags, True)
    n, k = X.shape
    m0 = np.full(k, float(spec.state_mean))
    P0 = np.eye(k) * float(spec.state_cov)
    a_prior_cov_inv = np.eye(k) / spec.a_cov
    omega_dof = float(spec.omega_dof) if spec.omega_dof is not None else k + 4.0
    if omega_dof <= k - 1:
        raise ValueError(f"omega_dof must exceed k - 1 = {k - 1}, got {omega_dof!r}")
    omega_scale = np.eye(k) * spec.omega_scale

    rng = np.random.default_rng(mcmc.seed)
    beta_ols, *_ = np.linalg.lstsq(X, y_eff, rcond=None)
    resid = y_eff - X @ beta_ols
    sigma2 = float(resid @ resid) / max(n - k, 1) or 1.0
    A = np.eye(k) * spec.a_mean_diag
    omega = np.eye(k) * (spec.omega_scale / max(omega_dof - k - 1.0, 1.0))

    keep_paths = np.empty((mcmc.keep, n, k))
    keep_a = np.empty((mcmc.keep, k, k))
    keep_omega = np.empty((mcmc.keep, k, k))
    keep_sigma2 = np.empty(mcmc.keep)
    jitters = 0
    kept = 0

    for sweep in range(mcmc.burn + mcmc.keep * mcmc.thin):
        beta, jc = _kernels.kalman_ffbs(
            y_eff, X, A, omega, sigma2, m0, P0, rng.standard_normal((n, k))
        )
        jitters += jc

        lagged = beta[:-1]
        current = beta[1:]
        omega_inv = np.linalg.inv(omega)
        for j in range(k):
            # residual of the state equation with column j removed
            r = current - lagged @ A.T + np.outer(lagged[:, j], A[:, j])
            s_jj = float(lagged[:, j] @ lagged[:, j])
            prec = a_prior_cov_inv + s_jj * omega_inv
            L = np.linalg.cholesky(prec)
            prior_mean_j = np.zeros(k)
            prior_mean_j[j] = spec.a_mean_diag
            rhs = a_prior_cov_inv @ prior_mean_j + omega_inv @ (lagged[:, j] @ r)
            mean = np.linalg.solve(L.T, np.linalg.solve(L, rhs))
            A[:, j] = mean + np.linalg.solve(L.T, rng.standard_normal(k))

        eta = current - lagged @ A.T
        omega = draw_inverse_wishart(rng, omega_scale + eta.T @ eta, omega_dof + (n - 1))

        obs_resid = y_eff - np.einsum("ij,ij->i", X, beta)
        sigma2 = draw_inverse_gamma(
            rng, spec.sigma_shape + 0.5 * n, spec.sigma_rate + 0.5 * float(obs_resid @ obs_resid)
        )

        if sweep >= mcmc.burn and (sweep - mcmc.burn) % mcmc.thin == 0:
            keep_paths[kept] = beta
            keep_a[kept] = A
            keep_omega[kept] = omega
            keep_sigma2[kept] = sigma2
            kept += 1

    return TvpArPosterior(
        spec=spec,
        paths=keep_paths,
        a_mats=keep_a,
        omegas=keep_omega,
        sigma2=keep_sigma2,
        history=y[-spec.lags:].copy(),
        n_obs=y.size,
        seed=mcmc.seed,
        flags={"jittered_covariances": jitters},
    )
