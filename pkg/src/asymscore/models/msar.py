"""Two-regime Markov-switching autoregression.

``y_t = alpha_{S_t} + beta_{S_t} y_{t-1} + eps_t`` with regime-specific
innovation variances and a first-order hidden Markov chain ``S_t``.
Each Gibbs sweep samples the full regime path (forward filter,
backward sample), then the regime coefficients, variances and
transition rows from their conjugate conditionals.  Regimes are
identified by relabeling every draw so the first regime has the
smaller innovation variance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from asymscore import _kernels
from asymscore.models.common import (
    GaussianConditional,
    McmcConfig,
    NigPrior,
    build_design,
    draw_inverse_gamma,
)

__all__ = ["MsArSpec", "MsArPosterior", "fit_msar"]

_LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass(frozen=True)
class MsArSpec:
    """Structure of the switching model: two regimes, one lag, and the
    Dirichlet concentration of each transition-matrix row."""

    regimes: int = 2
    lags: int = 1
    transition_prior: tuple[tuple[float, float], ...] = ((1.0, 1.0), (1.0, 1.0))

    def __post_init__(self):
        if self.regimes != 2:
            raise ValueError(f"only the two-regime model is implemented, got regimes={self.regimes!r}")
        if self.lags != 1:
            raise ValueError(f"only one lag is implemented, got lags={self.lags!r}")
        conc = np.asarray(self.transition_prior, dtype=float)
        if conc.shape != (2, 2) or not np.all(conc > 0.0):
            raise ValueError("transition_prior must be a (2, 2) array of positive concentrations")


@dataclass
class MsArPosterior:
    """Kept draws: per-regime coefficients ``(keep, 2, 2)`` ordered
    (intercept, lag), variances ``(keep, 2)`` with regime 0 the calm
    one, transition matrices ``(keep, 2, 2)`` and regime paths
    ``(keep, T_eff)``."""

    spec: MsArSpec
    coeffs: np.ndarray
    sigma2: np.ndarray
    trans: np.ndarray
    states: np.ndarray
    history: np.ndarray
    n_obs: int
    seed: int
    flags: dict = field(default_factory=dict)

    @property
    def n_kept(self) -> int:
        return self.coeffs.shape[0]


def _stationary_two_state(trans: np.ndarray) -> np.ndarray:
    off = trans[0, 1] + trans[1, 0]
    if off <= 0.0:  # two absorbing regimes; no information about the start
        return np.array([0.5, 0.5])
    return np.array([trans[1, 0] / off, trans[0, 1] / off])


def fit_msar(
    y,
    spec: MsArSpec = MsArSpec(),
    prior: NigPrior | None = None,
    mcmc: McmcConfig = McmcConfig(),
) -> MsArPosterior:
    """Gibbs sampler for the two-regime switching autoregression.

    `prior` is shared by both regimes' coefficient/variance blocks.
    The initial-regime distribution is tied to the stationary
    distribution of the current transition matrix.  A sweep whose
    sampled path leaves a regime empty draws that regime's parameters
    from the prior; ``flags['prior_draw_regimes']`` counts how often.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if not np.all(np.isfinite(y)):
        raise ValueError("series must be finite")
    if y.size <= 1 + 10:
        raise ValueError(f"series of length {y.size} is too short; need at least 12")
    if prior is None:
        prior = NigPrior()

    X, y_eff = build_design(y, (1,), True)
    n, k = X.shape
    prior_mean, prior_cov = prior.resolve(k)
    cond = GaussianConditional(prior_mean, prior_cov)
    conc = np.asarray(spec.transition_prior, dtype=float)

    rng = np.random.default_rng(mcmc.seed)

    # crude symmetric start: common OLS coefficients, variances split around
    # the residual variance so the regimes are distinguishable from sweep one
    beta_ols, *_ = np.linalg.lstsq(X, y_eff, rcond=None)
    resid = y_eff - X @ beta_ols
    base_var = float(resid @ resid) / max(n - k, 1) or 1.0
    coeffs = np.vstack([beta_ols, beta_ols])
    sigma2 = np.array([0.5 * base_var, 2.0 * base_var])
    trans = np.array([[0.9, 0.1], [0.1, 0.9]])

    keep_coeffs = np.empty((mcmc.keep, 2, k))
    keep_sigma2 = np.empty((mcmc.keep, 2))
    keep_trans = np.empty((mcmc.keep, 2, 2))
    keep_states = np.empty((mcmc.keep, n), dtype=np.int64)
    prior_draws = 0
    kept = 0

    for sweep in range(mcmc.burn + mcmc.keep * mcmc.thin):
        means = X @ coeffs.T  # (n, 2)
        loglik = -0.5 * (_LOG_2PI + np.log(sigma2) + (y_eff[:, None] - means) ** 2 / sigma2)
        states = _kernels.hamilton_ffbs(loglik, trans, _stationary_two_state(trans), rng.random(n))

        for m in range(2):
            mask = states == m
            z = rng.standard_normal(k)
            if mask.any():
                Xm = X[mask]
                coeffs[m] = cond.draw(Xm.T @ Xm, Xm.T @ y_eff[mask], sigma2[m], z)
            else:
                coeffs[m] = cond.prior_draw(z)
                prior_draws += 1
        for m in range(2):
            mask = states == m
            rm = y_eff[mask] - X[mask] @ coeffs[m]
            sigma2[m] = draw_inverse_gamma(
                rng, prior.sigma_shape + 0.5 * rm.size, prior.sigma_rate + 0.5 * float(rm @ rm)
            )
        counts = np.zeros((2, 2))
        np.add.at(counts, (states[:-1], states[1:]), 1.0)
        for m in range(2):
            trans[m] = rng.dirichlet(conc[m] + counts[m])

        if sigma2[0] > sigma2[1]:  # identification: regime 0 is the calm one
            coeffs = coeffs[::-1].copy()
            sigma2 = sigma2[::-1].copy()
            trans = trans[::-1, ::-1].copy()
            states = 1 - states

        if sweep >= mcmc.burn and (sweep - mcmc.burn) % mcmc.thin == 0:
            keep_coeffs[kept] = coeffs
            keep_sigma2[kept] = sigma2
            keep_trans[kept] = trans
            keep_states[kept] = states
            kept += 1

    return MsArPosterior(
        spec=spec,
        coeffs=keep_coeffs,
        sigma2=keep_sigma2,
        trans=keep_trans,
        states=keep_states,
        history=y[-1:].copy(),
        n_obs=y.size,
        seed=mcmc.seed,
        flags={"prior_draw_regimes": prior_draws},
    )
