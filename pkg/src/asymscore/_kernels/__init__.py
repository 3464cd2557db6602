"""Sampler inner loops with a compiled core and a pure-Python fallback.

The forward-filter/backward-sample recursions are the only genuinely
sequential hot loops in this package, so they live in a small Cython
extension.  A numpy implementation of the same algorithms
(:mod:`asymscore._kernels.pyref`) is used when the extension is not
built, or when the environment variable ``ASYMSCORE_PURE_PYTHON`` is
set to a non-empty value other than ``0``.

``BACKEND`` records which implementation is active ("compiled" or
"python").  Both consume caller-supplied random variates in the same
order, so results agree across backends up to floating-point rounding,
and reruns on one backend are bit-for-bit reproducible.
"""

from __future__ import annotations

import os

import numpy as np

from asymscore._kernels import pyref

__all__ = ["BACKEND", "hamilton_ffbs", "kalman_ffbs"]

if os.environ.get("ASYMSCORE_PURE_PYTHON", "").strip() not in ("", "0"):
    _impl = pyref
    BACKEND = "python"
else:
    try:
        from asymscore._kernels import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = pyref
        BACKEND = "python"


def _c(a, dtype=float) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=dtype)


def hamilton_ffbs(loglik, trans, init, uniforms) -> np.ndarray:
    """Sample a regime path; see :func:`asymscore._kernels.pyref.hamilton_ffbs`."""
    loglik = _c(loglik)
    trans = _c(trans)
    init = _c(init)
    uniforms = _c(uniforms)
    T, M = loglik.shape
    if trans.shape != (M, M) or init.shape != (M,) or uniforms.shape != (T,):
        raise ValueError("inconsistent shapes for the regime sampler")
    return np.asarray(_impl.hamilton_ffbs(loglik, trans, init, uniforms))


def kalman_ffbs(y, X, A, omega, sigma2, m0, P0, normals) -> tuple[np.ndarray, int]:
    """Draw a coefficient path; see :func:`asymscore._kernels.pyref.kalman_ffbs`."""
    y = _c(y)
    X = _c(X)
    A = _c(A)
    omega = _c(omega)
    m0 = _c(m0)
    P0 = _c(P0)
    normals = _c(normals)
    T, k = X.shape
    if (
        y.shape != (T,)
        or A.shape != (k, k)
        or omega.shape != (k, k)
        or m0.shape != (k,)
        or P0.shape != (k, k)
        or normals.shape != (T, k)
    ):
        raise ValueError("inconsistent shapes for the coefficient-path sampler")
    if not sigma2 > 0.0:
        raise ValueError(f"sigma2 must be positive, got {sigma2!r}")
    beta, jitter_count = _impl.kalman_ffbs(y, X, A, omega, float(sigma2), m0, P0, normals)
    return np.asarray(beta), int(jitter_count)
