"""Bayesian autoregression with a Gaussian/inverse-gamma Gibbs sampler.

The model is ``y_t = alpha + sum_l beta_l y_{t-l} + eps_t`` with iid
normal innovations.  An empty lag set with an intercept gives the
white-noise benchmark ``y_t = alpha + eps_t``.  Coefficients get an
independent normal prior, the innovation variance an inverse-gamma
prior; both full conditionals are conjugate, so the sampler alternates
two exact draws per sweep.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from asymscore.models.common import (
    GaussianConditional,
    McmcConfig,
    NigPrior,
    build_design,
    draw_inverse_gamma,
)

__all__ = ["ArSpec", "ArPosterior", "fit_ar"]


@dataclass(frozen=True)
class ArSpec:
    """Lag structure of an autoregression.

    `lags` is either a maximum lag (``2`` means lags 1 and 2) or an
    explicit collection of positive lags.  An empty collection with
    ``intercept=True`` is the white-noise model.
    """

    lags: int | tuple[int, ...] = 1
    intercept: bool = True

    def lag_tuple(self) -> tuple[int, ...]:
        if isinstance(self.lags, (int, np.integer)):
            if self.lags < 0:
                raise ValueError(f"maximum lag must be non-negative, got {self.lags!r}")
            return tuple(range(1, int(self.lags) + 1))
        lags = tuple(int(l) for l in self.lags)
        if any(l < 1 for l in lags) or len(set(lags)) != len(lags):
            raise ValueError(f"lags must be distinct positive integers, got {self.lags!r}")
        return tuple(sorted(lags))

    def n_coeffs(self) -> int:
        k = int(self.intercept) + len(self.lag_tuple())
        if k == 0:
            raise ValueError("model has no regressors; enable the intercept or add lags")
        return k


@dataclass
class ArPosterior:
    """Kept Gibbs draws of an autoregression.

    ``coeffs`` has one row per kept draw, columns ordered as the
    intercept (if present) followed by the lag coefficients.
    ``history`` holds the trailing observations needed to start a
    forecast.
    """

    spec: ArSpec
    coeffs: np.ndarray
    sigma2: np.ndarray
    history: np.ndarray
    n_obs: int
    seed: int
    flags: dict = field(default_factory=dict)

    @property
    def n_kept(self) -> int:
        return self.coeffs.shape[0]


def fit_ar(
    y,
    spec: ArSpec = ArSpec(),
    prior: NigPrior | None = None,
    mcmc: McmcConfig = McmcConfig(),
) -> ArPosterior:
    """Draw from the posterior of an autoregression by Gibbs sampling.

    Needs ``len(y) > max_lag + 10`` so the conditionals are informative.
    The run is a pure function of ``(y, spec, prior, mcmc)``; reruns
    with the same seed return identical draws.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if not np.all(np.isfinite(y)):
        raise ValueError("series must be finite")
    lags = spec.lag_tuple()
    p = max(lags) if lags else 0
    if y.size <= p + 10:
        raise ValueError(f"series of length {y.size} is too short for maximum lag {p}; need at least {p + 11}")
    if prior is None:
        prior = NigPrior()

    X, y_eff = build_design(y, lags, spec.intercept)
    n, k = X.shape
    prior_mean, prior_cov = prior.resolve(k)
    cond = GaussianConditional(prior_mean, prior_cov)
    xtx = X.T @ X
    xty = X.T @ y_eff

    rng = np.random.default_rng(mcmc.seed)
    sigma2 = float(np.var(y_eff)) or 1.0
    shape_post = prior.sigma_shape + 0.5 * n

    coeffs = np.empty((mcmc.keep, k))
    sigmas = np.empty(mcmc.keep)
    kept = 0
    for sweep in range(mcmc.burn + mcmc.keep * mcmc.thin):
        beta = cond.draw(xtx, xty, sigma2, rng.standard_normal(k))
        resid = y_eff - X @ beta
        sigma2 = draw_inverse_gamma(rng, shape_post, prior.sigma_rate + 0.5 * float(resid @ resid))
        if sweep >= mcmc.burn and (sweep - mcmc.burn) % mcmc.thin == 0:
            coeffs[kept] = beta
            sigmas[kept] = sigma2
            kept += 1

    return ArPosterior(
        spec=spec,
        coeffs=coeffs,
        sigma2=sigmas,
        history=y[-max(p, 1):].copy(),
        n_obs=y.size,
        seed=mcmc.seed,
    )
