"""Posterior predictive simulation for the fitted models.

:func:`predictive_draws` turns kept Gibbs draws into `m` equally
weighted draws from the h-step-ahead predictive distribution by
simulating each selected parameter draw forward h periods.  The result
feeds :class:`asymscore.distributions.EmpiricalCdf` directly.
"""

from __future__ import annotations

import numpy as np

from asymscore.models.ar import ArPosterior
from asymscore.models.msar import MsArPosterior
from asymscore.models.tvpar import TvpArPosterior

__all__ = ["predictive_draws"]


def predictive_draws(posterior, y_hist, horizon: int, m: int, seed) -> np.ndarray:
    """Simulate `m` draws of ``y_{T+horizon}`` from the posterior predictive.

    Parameters
    ----------
    posterior : ArPosterior, MsArPosterior or TvpArPosterior
    y_hist : array-like or None
        Observations up to the forecast origin (at least the maximum
        lag of the model).  None uses the history stored at fit time.
    horizon : int
        Steps ahead, at least 1.
    m : int
        Number of predictive draws.  When ``m <= n_kept`` the first
        ``m`` kept parameter draws are used in order; otherwise
        parameter draws are resampled with replacement.
    seed : int or numpy Generator

    Returns
    -------
    (m,) array of simulated values at the requested horizon.
    """
    from asymscore.seeding import as_generator

    if not isinstance(horizon, (int, np.integer)) or horizon < 1:
        raise ValueError(f"horizon must be a positive integer, got {horizon!r}")
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    rng = as_generator(seed)

    if isinstance(posterior, ArPosterior):
        return _ar_forward(posterior, _history(posterior, y_hist), int(horizon), int(m), rng)
    if isinstance(posterior, MsArPosterior):
        return _msar_forward(posterior, _history(posterior, y_hist), int(horizon), int(m), rng)
    if isinstance(posterior, TvpArPosterior):
        return _tvpar_forward(posterior, _history(posterior, y_hist), int(horizon), int(m), rng)
    raise TypeError(f"unsupported posterior type {type(posterior).__name__}")


def _history(posterior, y_hist) -> np.ndarray:
    hist = posterior.history if y_hist is None else np.asarray(y_hist, dtype=float)
    if hist.ndim != 1 or hist.size == 0:
        raise ValueError("y_hist must be a non-empty one-dimensional array")
    if not np.all(np.isfinite(hist)):
        raise ValueError("y_hist must be finite")
    return hist


def _select(n_kept: int, m: int, rng: np.random.Generator) -> np.ndarray:
    if m <= n_kept:
        return np.arange(m)
    return rng.integers(0, n_kept, size=m)


def _ar_forward(post: ArPosterior, hist: np.ndarray, horizon: int, m: int, rng) -> np.ndarray:
    lags = post.spec.lag_tuple()
    p = max(lags) if lags else 0
    if hist.size < p:
        raise ValueError(f"history of length {hist.size} is too short for maximum lag {p}")
    idx = _select(post.n_kept, m, rng)
    coeffs = post.coeffs[idx]
    sd = np.sqrt(post.sigma2[idx])
    # recent[:, l-1] holds y at lag l relative to the current step
    recent = np.tile(hist[::-1][:max(p, 1)], (m, 1))
    off = int(post.spec.intercept)
    y_cur = np.empty(m)
    for _ in range(horizon):
        mean = coeffs[:, 0] * off
        for pos, lag in enumerate(lags):
            mean = mean + coeffs[:, off + pos] * recent[:, lag - 1]
        y_cur = mean + sd * rng.standard_normal(m)
        if p > 0:
            recent[:, 1:] = recent[:, :-1]
            recent[:, 0] = y_cur
    return y_cur


def _msar_forward(post: MsArPosterior, hist: np.ndarray, horizon: int, m: int, rng) -> np.ndarray:
    idx = _select(post.n_kept, m, rng)
    coeffs = post.coeffs[idx]
    sd = np.sqrt(post.sigma2[idx])
    trans = post.trans[idx]
    state = post.states[idx, -1]
    rows = np.arange(m)
    y_cur = np.full(m, hist[-1])
    for _ in range(horizon):
        u = rng.random(m)
        state = np.where(u < trans[rows, state, 0], 0, 1)
        z = rng.standard_normal(m)
        y_cur = coeffs[rows, state, 0] + coeffs[rows, state, 1] * y_cur + sd[rows, state] * z
    return y_cur


def _tvpar_forward(post: TvpArPosterior, hist: np.ndarray, horizon: int, m: int, rng) -> np.ndarray:
    p = post.spec.lags
    if hist.size < p:
        raise ValueError(f"history of length {hist.size} is too short for lag order {p}")
    idx = _select(post.n_kept, m, rng)
    A = post.a_mats[idx]
    omega_chol = np.linalg.cholesky(post.omegas[idx])
    sd = np.sqrt(post.sigma2[idx])
    beta = post.paths[idx, -1, :]
    recent = np.tile(hist[::-1][:p], (m, 1))
    y_cur = np.empty(m)
    for _ in range(horizon):
        eta = np.einsum("mij,mj->mi", omega_chol, rng.standard_normal((m, beta.shape[1])))
        beta = np.einsum("mij,mj->mi", A, beta) + eta
        mean = beta[:, 0].copy()
        for lag in range(1, p + 1):
            mean += beta[:, lag] * recent[:, lag - 1]
        y_cur = mean + sd * rng.standard_normal(m)
        recent[:, 1:] = recent[:, :-1]
        recent[:, 0] = y_cur
    return y_cur
