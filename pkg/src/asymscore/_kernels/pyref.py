"""Pure-numpy reference implementations of the sampler inner loops.

These mirror the compiled versions in ``_core.pyx`` step for step,
including the order in which the supplied random variates are consumed
and the jitter rule used when a conditional covariance loses positive
definiteness.  Keeping the algorithms identical means a fit produces
(numerically) the same draws no matter which backend is active.
"""

from __future__ import annotations

import numpy as np


def hamilton_ffbs(loglik, trans, init, uniforms):
    """Sample a discrete regime path by forward filtering, backward sampling.

    Parameters
    ----------
    loglik : (T, M) array
        Log observation density of each period under each regime.
    trans : (M, M) array
        Row-stochastic transition matrix, ``trans[m, l] = P(S_t = l | S_{t-1} = m)``.
    init : (M,) array
        Distribution of the first regime.
    uniforms : (T,) array
        Uniform variates; ``uniforms[t]`` selects the regime at time t
        during the backward pass.

    Returns
    -------
    (T,) int64 array of regime indices.
    """
    T, M = loglik.shape
    filt = np.empty((T, M))
    pred = init.astype(float).copy()
    for t in range(T):
        shifted = np.exp(loglik[t] - loglik[t].max())
        a = pred * shifted
        s = a.sum()
        if s <= 0.0:  # all mass underflowed; fall back to the predictive
            a = pred.copy()
            s = a.sum()
        filt[t] = a / s
        if t < T - 1:
            pred = filt[t] @ trans

    states = np.empty(T, dtype=np.int64)
    states[T - 1] = _draw_index(filt[T - 1], uniforms[T - 1])
    for t in range(T - 2, -1, -1):
        w = filt[t] * trans[:, states[t + 1]]
        states[t] = _draw_index(w, uniforms[t])
    return states


def _draw_index(weights, u):
    """Smallest index whose cumulative weight reaches u * total."""
    total = weights.sum()
    target = u * total
    acc = 0.0
    for m in range(weights.size - 1):
        acc += weights[m]
        if acc >= target:
            return m
    return weights.size - 1


def kalman_ffbs(y, X, A, omega, sigma2, m0, P0, normals):
    """Draw a coefficient path from its Gaussian smoothing distribution.

    State space:  y_t = X_t' beta_t + e_t,  e_t ~ N(0, sigma2)
                  beta_t = A beta_{t-1} + eta_t,  eta_t ~ N(0, omega)

    Parameters
    ----------
    y : (T,) array
    X : (T, k) array
    A : (k, k) array
    omega : (k, k) array
    sigma2 : float
    m0, P0 : (k,) and (k, k) arrays
        Mean and covariance of beta_1 before seeing y_1.
    normals : (T, k) array
        Standard normal variates; row t is used for the draw of beta_t
        during the backward pass.

    Returns
    -------
    (beta, jitter_count)
        beta is the (T, k) sampled path; jitter_count is how many
        conditional covariances needed diagonal jitter to factor.
    """
    T, k = X.shape
    filt_m = np.empty((T, k))
    filt_P = np.empty((T, k, k))
    m_pred = m0.astype(float).copy()
    P_pred = P0.astype(float).copy()
    for t in range(T):
        x = X[t]
        Px = P_pred @ x
        S = float(x @ Px) + sigma2
        gain = Px / S
        m = m_pred + gain * (y[t] - float(x @ m_pred))
        P = P_pred - np.outer(Px, Px) / S
        P = 0.5 * (P + P.T)
        filt_m[t] = m
        filt_P[t] = P
        if t < T - 1:
            m_pred = A @ m
            P_pred = A @ P @ A.T + omega
            P_pred = 0.5 * (P_pred + P_pred.T)

    jitter_count = 0
    beta = np.empty((T, k))
    L, jc = _chol_psd(filt_P[T - 1])
    jitter_count += jc
    beta[T - 1] = filt_m[T - 1] + L @ normals[T - 1]
    for t in range(T - 2, -1, -1):
        P = filt_P[t]
        AP = A @ P
        Pp = AP @ A.T + omega
        Pp = 0.5 * (Pp + Pp.T)
        J = np.linalg.solve(Pp, AP).T  # P A' Pp^{-1}
        m_cond = filt_m[t] + J @ (beta[t + 1] - A @ filt_m[t])
        P_cond = P - J @ AP
        P_cond = 0.5 * (P_cond + P_cond.T)
        L, jc = _chol_psd(P_cond)
        jitter_count += jc
        beta[t] = m_cond + L @ normals[t]
    return beta, jitter_count


def _chol_psd(P):
    """Cholesky factor with escalating diagonal jitter on failure."""
    try:
        return np.linalg.cholesky(P), 0
    except np.linalg.LinAlgError:
        pass
    k = P.shape[0]
    base = max(np.trace(P) / k, 1.0)
    jitter = 1e-10 * base
    for attempt in range(1, 11):
        try:
            return np.linalg.cholesky(P + jitter * np.eye(k)), attempt
        except np.linalg.LinAlgError:
            jitter *= 10.0
    raise np.linalg.LinAlgError("conditional covariance is not positive definite even after jitter")
