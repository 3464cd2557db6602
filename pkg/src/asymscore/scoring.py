"""Proper scoring rules for density forecasts, with asymmetric variants.

Center stage is the asymmetric continuous probability score (ACPS): a
positively oriented, strictly proper rule with an asymmetry knob
``c`` in (0, 1).  Writing ``P`` for the forecast CDF and ``y`` for the
realization, the score integrates a two-branch quadratic reward over
thresholds ``u``::

    left of y  (u < y):   (c^2 - P(u)^2) * b(P(u))
    right of y (u >= y):  ((1 - c)^2 - (1 - P(u))^2) * b(P(u))

    b(p) = 1/(1-c)^2  if p > c,   1/c^2  otherwise.

At ``c = 0.5`` both branches weigh mistakes symmetrically and the rule
reduces to an affine transform of the CRPS; ``c < 0.5`` punishes
probability mass misplaced below the realization more heavily, and
``c > 0.5`` mass misplaced above it.

The classical (negatively oriented) CRPS is included, along with
threshold-weighted and quantile-weighted versions of both rules that
emphasize regions of the outcome space.  Scores of smooth forecasts
are computed by composite Gauss-Legendre quadrature over a finite
integration window, with panel edges at the realization, at the
forecast quantile of each asymmetry level, and at finite endpoints of
the forecast support, the places the integrand loses smoothness.
Draw-based forecasts have step CDFs, and their scores are finite sums
evaluated exactly instead of by quadrature.
The raw score values depend on the window, so comparisons across
models are only meaningful on a shared grid; :func:`default_grid`
builds one from the forecasts and observations being compared.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import ndtr

from asymscore.distributions import EmpiricalCdf

__all__ = [
    "POSITIVE",
    "NEGATIVE",
    "WEIGHT_SCHEMES",
    "QuadratureGrid",
    "ScoreSpec",
    "ScoreResult",
    "gauss_legendre",
    "default_grid",
    "threshold_weight",
    "quantile_weight",
    "acps_integrand",
    "crps_integrand",
    "acps",
    "crps",
    "weighted_score",
    "score_batch",
    "score_batch_many",
    "average_score",
    "rank_models",
]

POSITIVE = "positive"
NEGATIVE = "negative"

WEIGHT_SCHEMES = ("uniform", "center", "tails", "right_tail", "left_tail")

_SQRT_2PI = np.sqrt(2.0 * np.pi)


def gauss_legendre(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the `n`-point Gauss-Legendre rule on [a, b].

    Exact for polynomials up to degree ``2n - 1``.  A zero-length
    interval is allowed and yields all-zero weights.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"node count must be a positive integer, got {n!r}")
    if not (np.isfinite(a) and np.isfinite(b) and a <= b):
        raise ValueError(f"need finite bounds with a <= b, got [{a!r}, {b!r}]")
    x, w = _base_rule(int(n))
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


@lru_cache(maxsize=64)
def _base_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class QuadratureGrid:
    """Integration window and per-side resolution for the scoring rules.

    Scores from different grids are not comparable; every report in
    this package therefore records ``u_min``, ``u_max`` and
    ``nodes_per_side`` next to each score value.
    """

    u_min: float
    u_max: float
    nodes_per_side: int = 128

    def __post_init__(self):
        if not (np.isfinite(self.u_min) and np.isfinite(self.u_max)):
            raise ValueError("grid bounds must be finite")
        if not self.u_min < self.u_max:
            raise ValueError(f"grid needs u_min < u_max, got [{self.u_min!r}, {self.u_max!r}]")
        if not isinstance(self.nodes_per_side, (int, np.integer)) or self.nodes_per_side < 8:
            raise ValueError(f"nodes_per_side must be an integer >= 8, got {self.nodes_per_side!r}")

    @property
    def width(self) -> float:
        return self.u_max - self.u_min


def default_grid(forecasts, observations, nodes_per_side: int = 128) -> QuadratureGrid:
    """Shared integration window for a set of forecasts and observations.

    Takes the 0.001 and 0.999 quantiles of every forecast, the span of
    the observations, and pads by half the quantile range on each side.
    Pass *all* models under comparison so they are scored on one grid.
    """
    if not isinstance(forecasts, (list, tuple)):
        forecasts = [forecasts]
    if len(forecasts) == 0:
        raise ValueError("need at least one forecast to build a grid")
    obs = np.asarray(observations, dtype=float)
    if obs.size == 0 or not np.all(np.isfinite(obs)):
        raise ValueError("observations must be non-empty and finite")
    q_lo = min(f.quantile(0.001) for f in forecasts)
    q_hi = max(f.quantile(0.999) for f in forecasts)
    margin = 0.5 * (q_hi - q_lo)
    lo = min(q_lo, float(obs.min())) - margin
    hi = max(q_hi, float(obs.max())) + margin
    if not lo < hi:  # degenerate point forecast on a point observation
        lo, hi = lo - 0.5, hi + 0.5
    return QuadratureGrid(lo, hi, nodes_per_side)


def threshold_weight(scheme: str, x) -> np.ndarray:
    """Emphasis weight on the outcome axis, evaluated at threshold `x`.

    uniform    1
    center     standard normal density phi(x)
    tails      1 - phi(x)/phi(0)
    right_tail standard normal CDF Phi(x)
    left_tail  1 - Phi(x)
    """
    x = np.asarray(x, dtype=float)
    if scheme == "uniform":
        return np.ones_like(x)
    if scheme == "center":
        return np.exp(-0.5 * x * x) / _SQRT_2PI
    if scheme == "tails":
        return 1.0 - np.exp(-0.5 * x * x)
    if scheme == "right_tail":
        return ndtr(x)
    if scheme == "left_tail":
        return ndtr(-x)
    raise ValueError(f"unknown weight scheme {scheme!r}; expected one of {WEIGHT_SCHEMES}")


def quantile_weight(scheme: str, alpha) -> np.ndarray:
    """Emphasis weight on the probability axis, evaluated at level `alpha`.

    uniform    1
    center     alpha * (1 - alpha)
    tails      (2*alpha - 1)^2
    right_tail alpha^2
    left_tail  (1 - alpha)^2
    """
    a = np.asarray(alpha, dtype=float)
    if np.any((a < 0.0) | (a > 1.0)):
        raise ValueError("quantile levels must lie in [0, 1]")
    if scheme == "uniform":
        return np.ones_like(a)
    if scheme == "center":
        return a * (1.0 - a)
    if scheme == "tails":
        return (2.0 * a - 1.0) ** 2
    if scheme == "right_tail":
        return a * a
    if scheme == "left_tail":
        return (1.0 - a) ** 2
    raise ValueError(f"unknown weight scheme {scheme!r}; expected one of {WEIGHT_SCHEMES}")


def _ndtr_antideriv(x: np.ndarray) -> np.ndarray:
    # Antiderivative of the standard normal CDF: x * Phi(x) + phi(x).
    return x * ndtr(x) + np.exp(-0.5 * x * x) / _SQRT_2PI


def _threshold_weight_integral(scheme: str, a, b) -> np.ndarray:
    """Integral of :func:`threshold_weight` over ``[a, b]``, in closed form.

    Every scheme is built from constants, the normal density and the
    normal CDF, so the integrals reduce to ``Phi`` and ``x Phi(x) +
    phi(x)``.  Used by the exact scoring path for step CDFs, where the
    rest of the integrand is constant between consecutive draws.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if scheme == "uniform":
        return b - a
    if scheme == "center":
        return ndtr(b) - ndtr(a)
    if scheme == "tails":
        return (b - a) - _SQRT_2PI * (ndtr(b) - ndtr(a))
    if scheme == "right_tail":
        return _ndtr_antideriv(b) - _ndtr_antideriv(a)
    if scheme == "left_tail":
        return (b - a) - (_ndtr_antideriv(b) - _ndtr_antideriv(a))
    raise ValueError(f"unknown weight scheme {scheme!r}; expected one of {WEIGHT_SCHEMES}")


def _default_grid_placeholder() -> QuadratureGrid:
    raise TypeError("ScoreSpec requires an explicit grid; build one with default_grid()")


@dataclass(frozen=True)
class ScoreSpec:
    """Full description of one scoring rule instance.

    ``family`` is ``"acps"`` or ``"crps"``; ``c`` is the asymmetry
    level (ignored for CRPS); ``weighting`` selects no weighting, a
    threshold weight ``w(u)`` applied on the outcome axis, or a
    quantile weight ``v(P(u))`` applied on the probability axis; and
    ``scheme`` picks the emphasis region.  Uniform weights reproduce
    the unweighted rule exactly.
    """

    family: str
    c: float = 0.5
    weighting: str = "none"
    scheme: str = "uniform"
    grid: QuadratureGrid = field(default_factory=_default_grid_placeholder)

    def __post_init__(self):
        if self.family not in ("acps", "crps"):
            raise ValueError(f"family must be 'acps' or 'crps', got {self.family!r}")
        if not (np.isfinite(self.c) and 0.0 < self.c < 1.0):
            raise ValueError(f"asymmetry level c must lie strictly in (0, 1), got {self.c!r}")
        if self.weighting not in ("none", "threshold", "quantile"):
            raise ValueError(f"weighting must be 'none', 'threshold' or 'quantile', got {self.weighting!r}")
        if self.scheme not in WEIGHT_SCHEMES:
            raise ValueError(f"unknown weight scheme {self.scheme!r}; expected one of {WEIGHT_SCHEMES}")
        if not isinstance(self.grid, QuadratureGrid):
            raise ValueError("grid must be a QuadratureGrid")

    @property
    def orientation(self) -> str:
        """'positive' (higher is better) for ACPS, 'negative' for CRPS."""
        return POSITIVE if self.family == "acps" else NEGATIVE

    def label(self) -> str:
        """Short identifier, e.g. ``acps(c=0.05)`` or ``tcrps[right_tail]``."""
        core = f"acps(c={self.c:g})" if self.family == "acps" else "crps"
        if self.weighting == "none":
            return core
        prefix = "t" if self.weighting == "threshold" else "q"
        return f"{prefix}{core}[{self.scheme}]"


@dataclass(frozen=True)
class ScoreResult:
    """A score value plus the context needed to read it safely."""

    value: float
    orientation: str
    truncated: bool = False


def _bracket(p: np.ndarray, c: float) -> np.ndarray:
    return np.where(p > c, 1.0 / (1.0 - c) ** 2, 1.0 / (c * c))


def acps_integrand(forecast, y: float, c: float, u) -> float | np.ndarray:
    """Pointwise ACPS integrand at threshold `u` (vectorized in `u`)."""
    if not (0.0 < c < 1.0):
        raise ValueError(f"asymmetry level c must lie strictly in (0, 1), got {c!r}")
    u = np.asarray(u, dtype=float)
    p = np.asarray(forecast.cdf(u), dtype=float)
    br = _bracket(p, c)
    left = (c * c - p * p) * br
    right = ((1.0 - c) ** 2 - (1.0 - p) ** 2) * br
    out = np.where(u < y, left, right)
    return float(out) if out.ndim == 0 else out


def crps_integrand(forecast, y: float, u) -> float | np.ndarray:
    """Pointwise CRPS integrand (P(u) - 1{y <= u})^2 (vectorized in `u`)."""
    u = np.asarray(u, dtype=float)
    p = np.asarray(forecast.cdf(u), dtype=float)
    out = np.where(u < y, p * p, (1.0 - p) ** 2)
    return float(out) if out.ndim == 0 else out


def _panel_geometry(grid: QuadratureGrid, observations, interior=()) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Quadrature nodes and weights for each observation's panels.

    Every integrand handled here is smooth except at the observation
    itself (a jump) and, for the asymmetric family with c != 0.5, at
    the forecast quantile of the asymmetry level (a derivative kink
    where the bracket normalizer switches).  Panels are therefore laid
    between breakpoints `{u_min, interior..., y, u_max}` so each panel
    sees a smooth piece and the composite rule converges at the usual
    Gauss rate.  Breakpoints are clipped into the window; coincident
    breakpoints produce zero-width panels with zero weights, which
    contribute nothing.
    """
    ys = np.atleast_1d(np.asarray(observations, dtype=float))
    if ys.ndim != 1 or ys.size == 0:
        raise ValueError("observations must be a non-empty one-dimensional array")
    if not np.all(np.isfinite(ys)):
        raise ValueError("observations must be finite")
    n_nodes = grid.nodes_per_side
    x, wb = _base_rule(n_nodes)
    interior = np.asarray(interior, dtype=float).ravel()
    k = interior.size
    truncated = (ys < grid.u_min) | (ys > grid.u_max)
    breaks = np.empty((ys.size, k + 1))
    if k:
        breaks[:, :k] = np.clip(interior, grid.u_min, grid.u_max)
    breaks[:, k] = np.clip(ys, grid.u_min, grid.u_max)
    breaks.sort(axis=1)
    edges = np.empty((ys.size, k + 3))
    edges[:, 0] = grid.u_min
    edges[:, 1:-1] = breaks
    edges[:, -1] = grid.u_max
    half = 0.5 * (edges[:, 1:] - edges[:, :-1])
    mid = 0.5 * (edges[:, 1:] + edges[:, :-1])
    nodes = (mid[:, :, None] + half[:, :, None] * x).reshape(ys.size, -1)
    quad_w = (half[:, :, None] * wb).reshape(ys.size, -1)
    return nodes, quad_w, truncated


def _evaluate_spec(spec: ScoreSpec, nodes: np.ndarray, quad_w: np.ndarray, p: np.ndarray, ys: np.ndarray) -> np.ndarray:
    below = nodes < ys[:, None]
    if spec.family == "acps":
        c = spec.c
        br = _bracket(p, c)
        f = np.where(below, (c * c - p * p) * br,
                     ((1.0 - c) ** 2 - (1.0 - p) ** 2) * br)
    else:
        f = np.where(below, p * p, (1.0 - p) ** 2)
    if spec.weighting == "threshold":
        f = f * threshold_weight(spec.scheme, nodes)
    elif spec.weighting == "quantile":
        f = f * quantile_weight(spec.scheme, p)
    return np.einsum("ij,ij->i", quad_w, f)


def _exact_step_scores(draws: np.ndarray, ys: np.ndarray, specs, grid: QuadratureGrid) -> tuple[list[np.ndarray], np.ndarray]:
    """Exact scores when the forecast CDF is a step function.

    Between consecutive sorted draws the CDF is constant, so each score
    integral is a finite sum over the intervals cut by the window
    edges, the draws and the realization.  The integrand factor that
    depends on the CDF level is constant on each interval, and the
    threshold weights integrate in closed form, so no quadrature error
    enters at all.  Quadrature would struggle here: a staircase with
    hundreds of jumps defeats polynomial rules unless every jump sits
    on a panel edge.

    `draws` must be sorted ascending; `ys` one-dimensional and finite.
    Returns ``(values_per_spec, truncated)`` matching
    :func:`score_batch_many`.
    """
    if ys.ndim != 1 or ys.size == 0:
        raise ValueError("observations must be a non-empty one-dimensional array")
    if not np.all(np.isfinite(ys)):
        raise ValueError("observations must be finite")
    lo, hi = grid.u_min, grid.u_max
    s = np.clip(draws, lo, hi)
    edges = np.concatenate(([lo], s, [hi]))
    levels = np.arange(s.size + 1) / s.size
    truncated = (ys < lo) | (ys > hi)
    yc = np.clip(ys, lo, hi)

    f_below = []
    f_above = []
    for spec in specs:
        if spec.family == "acps":
            c = spec.c
            br = _bracket(levels, c)
            fb = (c * c - levels * levels) * br
            fa = ((1.0 - c) ** 2 - (1.0 - levels) ** 2) * br
        else:
            fb = levels * levels
            fa = (1.0 - levels) ** 2
        if spec.weighting == "quantile":
            v = quantile_weight(spec.scheme, levels)
            fb = fb * v
            fa = fa * v
        f_below.append(fb)
        f_above.append(fa)

    a = edges[:-1]
    b = edges[1:]
    values = [np.empty(ys.size) for _ in specs]
    # Interval-by-observation arrays are built in row blocks to bound
    # peak memory when both the draw count and the batch are large.
    block = max(1, 1_000_000 // edges.size)
    for start in range(0, ys.size, block):
        y_col = yc[start:start + block, None]
        cut_b = np.minimum(b, y_col)  # upper end of each interval's piece below y
        cut_a = np.maximum(a, y_col)  # lower end of each interval's piece above y
        plain = None
        by_scheme: dict[str, tuple[np.ndarray, np.ndarray]] = {}
        for i, spec in enumerate(specs):
            if spec.weighting == "threshold":
                if spec.scheme not in by_scheme:
                    wb = np.where(cut_b > a, _threshold_weight_integral(spec.scheme, a, cut_b), 0.0)
                    wa = np.where(b > cut_a, _threshold_weight_integral(spec.scheme, cut_a, b), 0.0)
                    by_scheme[spec.scheme] = (wb, wa)
                wb, wa = by_scheme[spec.scheme]
            else:
                if plain is None:
                    plain = (np.clip(cut_b - a, 0.0, None), np.clip(b - cut_a, 0.0, None))
                wb, wa = plain
            values[i][start:start + block] = wb @ f_below[i] + wa @ f_above[i]
    return values, truncated


def score_batch(forecast, observations, spec: ScoreSpec) -> tuple[np.ndarray, np.ndarray]:
    """Score one forecast distribution against many observations.

    Returns ``(values, truncated)`` where ``values[i]`` is the score at
    ``observations[i]`` and ``truncated[i]`` flags realizations outside
    the integration window (the side beyond the window contributes
    zero, so such values understate the integral).

    This is the vectorized engine behind :func:`acps`, :func:`crps` and
    :func:`weighted_score`; the forecast CDF is evaluated once on the
    full node array.
    """
    values, truncated = score_batch_many(forecast, observations, [spec])
    return values[0], truncated


def score_batch_many(forecast, observations, specs) -> tuple[list[np.ndarray], np.ndarray]:
    """Score one forecast against many observations under several rules.

    All specs must share one grid.  Draw-based forecasts
    (:class:`asymscore.distributions.EmpiricalCdf`) are scored exactly:
    their step CDF makes every integral a finite sum, see
    :func:`_exact_step_scores`.  Smooth forecasts go through composite
    Gauss-Legendre panels split at every asymmetry pivot's forecast
    quantile in the batch and at finite support endpoints of the
    forecast, so each rule integrates a piecewise smooth function with
    its kinks on panel edges and every rule is evaluated on the same
    nodes.  The forecast CDF is computed once and reused, which matters
    when ranking candidates under a panel of asymmetry levels.  Returns
    ``(values_per_spec, truncated)``.
    """
    specs = list(specs)
    if not specs:
        raise ValueError("need at least one spec")
    grid = specs[0].grid
    if any(s.grid != grid for s in specs[1:]):
        raise ValueError("all specs in one batch must share the same grid")
    ys = np.atleast_1d(np.asarray(observations, dtype=float))
    if isinstance(forecast, EmpiricalCdf):
        return _exact_step_scores(forecast.draws, ys, specs, grid)
    pivots = sorted({s.c for s in specs if s.family == "acps" and s.c != 0.5})
    interior = [float(forecast.quantile(c)) for c in pivots]
    support = getattr(forecast, "support", None)
    if support is not None:
        interior.extend(float(edge) for edge in support() if np.isfinite(edge))
    nodes, quad_w, truncated = _panel_geometry(grid, ys, interior)
    p = np.asarray(forecast.cdf(nodes), dtype=float)
    return [_evaluate_spec(s, nodes, quad_w, p, ys) for s in specs], truncated


def acps(forecast, y: float, c: float, grid: QuadratureGrid) -> ScoreResult:
    """Asymmetric continuous probability score of `forecast` at `y`.

    Positively oriented: larger is better.  The value is bounded above
    by the window width ``grid.width`` and depends on the window, so
    compare models only on a shared grid.
    """
    spec = ScoreSpec(family="acps", c=c, grid=grid)
    values, truncated = score_batch(forecast, [y], spec)
    return ScoreResult(float(values[0]), POSITIVE, bool(truncated[0]))


def crps(forecast, y: float, grid: QuadratureGrid) -> ScoreResult:
    """Continuous ranked probability score (negatively oriented)."""
    spec = ScoreSpec(family="crps", grid=grid)
    values, truncated = score_batch(forecast, [y], spec)
    return ScoreResult(float(values[0]), NEGATIVE, bool(truncated[0]))


def weighted_score(forecast, y: float, spec: ScoreSpec) -> ScoreResult:
    """Score of `forecast` at `y` under an arbitrary :class:`ScoreSpec`."""
    values, truncated = score_batch(forecast, [y], spec)
    return ScoreResult(float(values[0]), spec.orientation, bool(truncated[0]))


def average_score(forecasts, observations, spec: ScoreSpec) -> float:
    """Mean score over observations.

    `forecasts` is either one distribution reused for every observation
    or a sequence with one distribution per observation.
    """
    ys = np.atleast_1d(np.asarray(observations, dtype=float))
    if isinstance(forecasts, (list, tuple)):
        if len(forecasts) != ys.size:
            raise ValueError(
                f"got {len(forecasts)} forecasts for {ys.size} observations; "
                "pass one distribution or one per observation"
            )
        values = np.array([score_batch(f, [y], spec)[0][0] for f, y in zip(forecasts, ys)])
    else:
        values, _ = score_batch(forecasts, ys, spec)
    return float(values.mean())


def rank_models(values: Sequence[float], orientation: str) -> np.ndarray:
    """Rank average scores; rank 1 is the best model.

    Positively oriented scores rank the largest value first, negatively
    oriented ones the smallest.  Ties break by input order.
    """
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 1 or vals.size == 0:
        raise ValueError("values must be a non-empty one-dimensional array")
    if not np.all(np.isfinite(vals)):
        raise ValueError("values must be finite")
    if orientation == POSITIVE:
        key = -vals
    elif orientation == NEGATIVE:
        key = vals
    else:
        raise ValueError(f"orientation must be {POSITIVE!r} or {NEGATIVE!r}, got {orientation!r}")
    order = np.argsort(key, kind="stable")
    ranks = np.empty(vals.size, dtype=int)
    ranks[order] = np.arange(1, vals.size + 1)
    return ranks
