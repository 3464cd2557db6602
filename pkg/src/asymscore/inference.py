"""Equal-predictive-ability tests and calibration diagnostics.

The main entry point is :func:`dm_test`, a Diebold-Mariano style test
of equal expected score between two forecast sequences.  Score
differences are converted to a loss differential (so the test is
orientation-agnostic), the long-run variance of that differential is
estimated with a Bartlett kernel, and the studentized mean is compared
against a standard normal.

:func:`pit` computes probability integral transforms for calibration
checks: under a correctly specified forecast distribution the PITs are
iid uniform on (0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from asymscore.scoring import NEGATIVE, POSITIVE

__all__ = [
    "LrvResult",
    "DmResult",
    "loss_differential",
    "spectral_density_zero",
    "dm_test",
    "significance_stars",
    "pit",
]


def loss_differential(scores_1, scores_2, orientation: str) -> np.ndarray:
    """Per-period loss difference between two score sequences.

    Scores are converted to losses first (negated when positively
    oriented), so a positive entry always means model 2 did better in
    that period, whichever orientation the underlying rule has.
    """
    s1 = np.asarray(scores_1, dtype=float)
    s2 = np.asarray(scores_2, dtype=float)
    if s1.ndim != 1 or s2.ndim != 1 or s1.shape != s2.shape:
        raise ValueError(f"score sequences must be 1-d with equal length, got {s1.shape} and {s2.shape}")
    if s1.size < 2:
        raise ValueError("need at least two periods")
    if not (np.all(np.isfinite(s1)) and np.all(np.isfinite(s2))):
        raise ValueError("scores must be finite")
    if orientation == POSITIVE:
        return s2 - s1
    if orientation == NEGATIVE:
        return s1 - s2
    raise ValueError(f"orientation must be {POSITIVE!r} or {NEGATIVE!r}, got {orientation!r}")


@dataclass(frozen=True)
class LrvResult:
    """Long-run variance estimate with the bandwidth that produced it."""

    value: float
    bandwidth: int
    floored: bool


def spectral_density_zero(series, bandwidth: int | None = None) -> LrvResult:
    """Bartlett-kernel long-run variance (2 pi times the spectrum at zero).

    ``gamma_0 + 2 * sum_{k=1..K} (1 - k/(K+1)) * gamma_k`` with sample
    autocovariances ``gamma_k`` (denominator T).  When `bandwidth` is
    None it is set to ``floor(1.2 * T**(1/3))``.  A negative estimate is
    floored at ``gamma_0 * 1e-8`` and flagged; an exactly constant
    series yields value 0.
    """
    d = np.asarray(series, dtype=float)
    if d.ndim != 1 or d.size < 2:
        raise ValueError("series must be 1-d with at least two entries")
    if not np.all(np.isfinite(d)):
        raise ValueError("series must be finite")
    T = d.size
    if bandwidth is None:
        # nudge before flooring so exact integer boundaries (e.g. T a
        # perfect cube) are not lost to floating-point cube roots
        K = int(np.floor(1.2 * np.cbrt(T) + 1e-9))
    else:
        if not isinstance(bandwidth, (int, np.integer)) or bandwidth < 0:
            raise ValueError(f"bandwidth must be a non-negative integer, got {bandwidth!r}")
        K = int(bandwidth)
    K = min(K, T - 1)

    centered = d - d.mean()
    gamma0 = float(centered @ centered) / T
    value = gamma0
    for k in range(1, K + 1):
        gamma_k = float(centered[k:] @ centered[:-k]) / T
        value += 2.0 * (1.0 - k / (K + 1.0)) * gamma_k
    floored = False
    if value < 0.0:
        value = gamma0 * 1e-8
        floored = True
    return LrvResult(float(value), K, floored)


@dataclass(frozen=True)
class DmResult:
    """Outcome of an equal-predictive-ability test.

    ``statistic`` is asymptotically standard normal under equal
    expected score; positive values favor the second model (see
    :func:`loss_differential`).  ``degenerate`` marks the zero
    long-run-variance conventions, where the statistic is 0 or signed
    infinity rather than a studentized mean.
    """

    n_obs: int
    mean_diff: float
    lrv: float
    bandwidth: int
    statistic: float
    p_value: float
    stars: str
    degenerate: bool = False


def dm_test(scores_1, scores_2, orientation: str, bandwidth: int | None = None) -> DmResult:
    """Test equal expected score of two forecast sequences.

    Parameters
    ----------
    scores_1, scores_2 : array-like
        Per-period scores of the two models on the same realizations.
    orientation : str
        Orientation of the scoring rule that produced them.
    bandwidth : int, optional
        Bartlett truncation lag; automatic when omitted.

    Returns
    -------
    DmResult
        Two-sided test against the standard normal, with significance
        stars at the 10/5/1 percent levels.
    """
    d = loss_differential(scores_1, scores_2, orientation)
    T = d.size
    if T < 10:
        raise ValueError(f"need at least 10 periods for the test, got {T}")
    mean_diff = float(d.mean())
    lrv = spectral_density_zero(d, bandwidth)
    if lrv.value <= 0.0:
        if mean_diff == 0.0:
            statistic, p_value = 0.0, 1.0
        else:
            statistic = float(np.copysign(np.inf, mean_diff))
            p_value = 0.0
        degenerate = True
    else:
        statistic = float(np.sqrt(T) * mean_diff / np.sqrt(lrv.value))
        p_value = float(2.0 * (1.0 - ndtr(abs(statistic))))
        degenerate = False
    return DmResult(
        n_obs=T,
        mean_diff=mean_diff,
        lrv=lrv.value,
        bandwidth=lrv.bandwidth,
        statistic=statistic,
        p_value=p_value,
        stars=significance_stars(p_value),
        degenerate=degenerate,
    )


def significance_stars(p_value: float) -> str:
    """'***' below 1%, '**' below 5%, '*' below 10%, else empty."""
    if not (np.isfinite(p_value) and 0.0 <= p_value <= 1.0):
        raise ValueError(f"p-value must lie in [0, 1], got {p_value!r}")
    if p_value < 0.01:
        return "***"
    if p_value < 0.05:
        return "**"
    if p_value < 0.10:
        return "*"
    return ""


def pit(forecast, y) -> float | np.ndarray:
    """Probability integral transform: the forecast CDF at the realization."""
    return forecast.cdf(y)
