"""Predictive distributions used as forecast inputs to the scoring rules.

Four analytic families (normal, Student-t, gamma, beta) plus an
empirical CDF built from posterior predictive draws.  All expose the
same surface:

``cdf(u)``
    CDF evaluated at scalar or array ``u``; vectorized, shape-preserving.
``quantile(alpha)``
    Inverse CDF for ``alpha`` in the open unit interval.  For the
    empirical case this is the generalized inverse (smallest draw whose
    CDF value reaches ``alpha``), with no interpolation.
``sample(size, seed)``
    Deterministic sampling given an explicit seed.  The empirical
    distribution resamples its stored draws with replacement.

Analytic families additionally provide ``pdf(u)``.  Scale-type
parameters follow the conventions: the normal is parameterized by
mean and *variance*, the gamma by shape and *rate*, the Student-t by
location, scale and degrees of freedom.
"""

from __future__ import annotations

import numpy as np
from scipy import stats

from asymscore.seeding import as_generator

__all__ = ["Normal", "StudentT", "Gamma", "Beta", "EmpiricalCdf"]


def _check_finite_eval(u) -> np.ndarray:
    out = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(out)):
        raise ValueError("evaluation points must be finite")
    return out


def _check_alpha(alpha) -> np.ndarray:
    out = np.asarray(alpha, dtype=float)
    if not np.all((out > 0.0) & (out < 1.0)):
        raise ValueError("quantile level must lie strictly between 0 and 1")
    return out


def _check_size(size: int) -> int:
    if not isinstance(size, (int, np.integer)) or size < 1:
        raise ValueError(f"sample size must be a positive integer, got {size!r}")
    return int(size)


class _Analytic:
    """Shared plumbing for the scipy-backed families."""

    _frozen: stats.rv_continuous  # set by subclasses

    def cdf(self, u) -> float | np.ndarray:
        u = _check_finite_eval(u)
        out = self._frozen.cdf(u)
        return float(out) if out.ndim == 0 else out

    def pdf(self, u) -> float | np.ndarray:
        u = _check_finite_eval(u)
        out = self._frozen.pdf(u)
        return float(out) if out.ndim == 0 else out

    def quantile(self, alpha) -> float | np.ndarray:
        alpha = _check_alpha(alpha)
        out = self._frozen.ppf(alpha)
        return float(out) if out.ndim == 0 else out

    def support(self) -> tuple[float, float]:
        """Endpoints of the support, infinite for unbounded families.

        The CDF is smooth strictly inside the support but only
        one-sidedly so at a finite endpoint, so integration routines
        treat finite endpoints as panel breakpoints.
        """
        lo, hi = self._frozen.support()
        return float(lo), float(hi)


class Normal(_Analytic):
    """Normal distribution with mean `mean` and variance `variance`."""

    def __init__(self, mean: float, variance: float):
        if not np.isfinite(mean):
            raise ValueError("mean must be finite")
        if not (np.isfinite(variance) and variance > 0.0):
            raise ValueError(f"variance must be positive, got {variance!r}")
        self.mean = float(mean)
        self.variance = float(variance)
        self._sd = float(np.sqrt(variance))
        self._frozen = stats.norm(self.mean, self._sd)

    def sample(self, size: int, seed: int | np.random.Generator) -> np.ndarray:
        rng = as_generator(seed)
        return rng.normal(self.mean, self._sd, size=_check_size(size))

    def label(self) -> str:
        return f"N({self.mean:g},{self.variance:g})"

    def __repr__(self) -> str:
        return f"Normal(mean={self.mean!r}, variance={self.variance!r})"


class StudentT(_Analytic):
    """Student-t distribution with location, scale and degrees of freedom."""

    def __init__(self, loc: float, scale: float, df: float):
        if not np.isfinite(loc):
            raise ValueError("loc must be finite")
        if not (np.isfinite(scale) and scale > 0.0):
            raise ValueError(f"scale must be positive, got {scale!r}")
        if not (np.isfinite(df) and df > 0.0):
            raise ValueError(f"df must be positive, got {df!r}")
        self.loc = float(loc)
        self.scale = float(scale)
        self.df = float(df)
        self._frozen = stats.t(self.df, loc=self.loc, scale=self.scale)

    def sample(self, size: int, seed: int | np.random.Generator) -> np.ndarray:
        rng = as_generator(seed)
        return self.loc + self.scale * rng.standard_t(self.df, size=_check_size(size))

    def label(self) -> str:
        return f"t({self.loc:g},{self.scale:g},{self.df:g})"

    def __repr__(self) -> str:
        return f"StudentT(loc={self.loc!r}, scale={self.scale!r}, df={self.df!r})"


class Gamma(_Analytic):
    """Gamma distribution in the shape/rate parameterization."""

    def __init__(self, shape: float, rate: float):
        if not (np.isfinite(shape) and shape > 0.0):
            raise ValueError(f"shape must be positive, got {shape!r}")
        if not (np.isfinite(rate) and rate > 0.0):
            raise ValueError(f"rate must be positive, got {rate!r}")
        self.shape = float(shape)
        self.rate = float(rate)
        self._frozen = stats.gamma(self.shape, scale=1.0 / self.rate)

    def sample(self, size: int, seed: int | np.random.Generator) -> np.ndarray:
        rng = as_generator(seed)
        return rng.gamma(self.shape, 1.0 / self.rate, size=_check_size(size))

    def label(self) -> str:
        return f"Ga({self.shape:g},{self.rate:g})"

    def __repr__(self) -> str:
        return f"Gamma(shape={self.shape!r}, rate={self.rate!r})"


class Beta(_Analytic):
    """Beta distribution on the unit interval."""

    def __init__(self, a: float, b: float):
        if not (np.isfinite(a) and a > 0.0):
            raise ValueError(f"a must be positive, got {a!r}")
        if not (np.isfinite(b) and b > 0.0):
            raise ValueError(f"b must be positive, got {b!r}")
        self.a = float(a)
        self.b = float(b)
        self._frozen = stats.beta(self.a, self.b)

    def sample(self, size: int, seed: int | np.random.Generator) -> np.ndarray:
        rng = as_generator(seed)
        return rng.beta(self.a, self.b, size=_check_size(size))

    def label(self) -> str:
        return f"Be({self.a:g},{self.b:g})"

    def __repr__(self) -> str:
        return f"Beta(a={self.a!r}, b={self.b!r})"


class EmpiricalCdf:
    """Step CDF of a finite sample, typically posterior predictive draws.

    ``cdf(u)`` is the right-continuous fraction of draws ``<= u`` and
    ``quantile(alpha)`` returns the order statistic at position
    ``ceil(alpha * n)``, so both are exact functions of the sample with
    no smoothing or interpolation.
    """

    def __init__(self, draws):
        draws = np.asarray(draws, dtype=float)
        if draws.ndim != 1 or draws.size == 0:
            raise ValueError("draws must be a non-empty one-dimensional array")
        if not np.all(np.isfinite(draws)):
            raise ValueError("draws must be finite")
        self.draws = np.sort(draws)
        self.n = int(draws.size)

    def cdf(self, u) -> float | np.ndarray:
        u = _check_finite_eval(u)
        counts = np.searchsorted(self.draws, u, side="right")
        out = counts / self.n
        return float(out) if out.ndim == 0 else out

    def quantile(self, alpha) -> float | np.ndarray:
        alpha = _check_alpha(alpha)
        idx = np.ceil(alpha * self.n).astype(int) - 1
        out = self.draws[np.clip(idx, 0, self.n - 1)]
        return float(out) if out.ndim == 0 else out

    def pdf(self, u):
        raise NotImplementedError("a step CDF has no density; pdf is unsupported")

    def support(self) -> tuple[float, float]:
        """Smallest and largest draw: the CDF is 0 below and 1 above."""
        return float(self.draws[0]), float(self.draws[-1])

    def sample(self, size: int, seed: int | np.random.Generator) -> np.ndarray:
        rng = as_generator(seed)
        return rng.choice(self.draws, size=_check_size(size), replace=True)

    def label(self) -> str:
        return f"ecdf(n={self.n})"

    def __repr__(self) -> str:
        return f"EmpiricalCdf(n={self.n})"
