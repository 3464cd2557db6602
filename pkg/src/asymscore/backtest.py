"""Rolling-window out-of-sample comparison of forecasting models.

For each vintage a fixed-length window of observations is used to fit
every configured model once; each fitted model then produces posterior
predictive draws at each requested horizon, and the resulting
empirical predictive distributions are scored against the realized
value.  Scores for one horizon live on a single shared integration
grid (built from all predictive draws and realizations, unless the
configuration pins one), so values are comparable across models and
across vintages.

A model failure at one vintage is isolated: the affected cells are
marked failed and every other cell proceeds.  Reports are computed on
the vintages where all models succeeded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from asymscore.distributions import EmpiricalCdf
from asymscore.inference import DmResult, dm_test
from asymscore.models import (
    ArSpec,
    McmcConfig,
    MsArSpec,
    NigPrior,
    TvpArSpec,
    fit_ar,
    fit_msar,
    fit_tvpar,
    predictive_draws,
)
from asymscore.scoring import QuadratureGrid, ScoreSpec, default_grid, rank_models, score_batch
from asymscore.seeding import derive_seed

__all__ = [
    "ModelConfig",
    "ScoreSpecTemplate",
    "BacktestConfig",
    "BacktestResult",
    "RankingRow",
    "default_score_templates",
    "run_backtest",
    "ranking_report",
    "best_model_trace",
    "best_model_frequency",
]

DEFAULT_C_LEVELS = (0.05, 0.275, 0.5, 0.725, 0.95)

MODEL_KINDS = ("ar", "msar", "tvpar")


@dataclass(frozen=True)
class ScoreSpecTemplate:
    """A scoring rule without its grid; the backtest resolves the grid
    per horizon and instantiates a full :class:`ScoreSpec`."""

    family: str
    c: float = 0.5
    weighting: str = "none"
    scheme: str = "uniform"

    def __post_init__(self):
        self.to_spec(QuadratureGrid(0.0, 1.0))  # validates the fields

    def to_spec(self, grid: QuadratureGrid) -> ScoreSpec:
        return ScoreSpec(self.family, c=self.c, weighting=self.weighting, scheme=self.scheme, grid=grid)

    def spec_id(self) -> str:
        return self.to_spec(QuadratureGrid(0.0, 1.0)).label()


def default_score_templates() -> tuple[ScoreSpecTemplate, ...]:
    """CRPS plus the asymmetric score at the default asymmetry levels."""
    out = [ScoreSpecTemplate("crps")]
    out.extend(ScoreSpecTemplate("acps", c=c) for c in DEFAULT_C_LEVELS)
    return tuple(out)


@dataclass(frozen=True)
class ModelConfig:
    """One competing model: an identifier, the model kind and its options.

    ``lags`` applies to the autoregressive kinds (for ``ar`` an empty
    tuple with the intercept gives the white-noise benchmark).
    ``tvp_spec`` carries the priors of the time-varying model; its lag
    order is taken from ``lags``.
    """

    model_id: str
    kind: str
    lags: int | tuple[int, ...] = 1
    intercept: bool = True
    prior: NigPrior = field(default_factory=NigPrior)
    transition_prior: tuple = ((1.0, 1.0), (1.0, 1.0))
    tvp_spec: TvpArSpec | None = None
    burn: int = 500
    keep: int = 1000
    thin: int = 1

    def __post_init__(self):
        if not self.model_id or not isinstance(self.model_id, str):
            raise ValueError(f"model_id must be a non-empty string, got {self.model_id!r}")
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"kind must be one of {MODEL_KINDS}, got {self.kind!r}")
        McmcConfig(burn=self.burn, keep=self.keep, thin=self.thin)  # validates the budget

    def fit(self, window: np.ndarray, seed: int):
        mcmc = McmcConfig(burn=self.burn, keep=self.keep, thin=self.thin, seed=seed)
        if self.kind == "ar":
            return fit_ar(window, ArSpec(self.lags, self.intercept), self.prior, mcmc)
        if self.kind == "msar":
            return fit_msar(window, MsArSpec(transition_prior=self.transition_prior), self.prior, mcmc)
        lag_order = self.lags if isinstance(self.lags, (int, np.integer)) else max(self.lags)
        base = self.tvp_spec if self.tvp_spec is not None else TvpArSpec()
        spec = TvpArSpec(
            lags=int(lag_order),
            state_mean=base.state_mean,
            state_cov=base.state_cov,
            a_mean_diag=base.a_mean_diag,
            a_cov=base.a_cov,
            omega_scale=base.omega_scale,
            omega_dof=base.omega_dof,
            sigma_shape=base.sigma_shape,
            sigma_rate=base.sigma_rate,
        )
        return fit_tvpar(window, spec, mcmc)


@dataclass(frozen=True)
class BacktestConfig:
    """Everything a rolling backtest needs besides the series itself."""

    window_length: int
    horizons: tuple[int, ...]
    models: tuple[ModelConfig, ...]
    benchmark_model: str | None = None
    score_templates: tuple[ScoreSpecTemplate, ...] = field(default_factory=default_score_templates)
    m_predictive: int = 500
    seed: int = 0
    n_vintages: int | None = None
    nodes_per_side: int = 128
    grid: QuadratureGrid | None = None

    def __post_init__(self):
        if not isinstance(self.window_length, (int, np.integer)) or self.window_length < 30:
            raise ValueError(f"window_length must be an integer >= 30, got {self.window_length!r}")
        hs = tuple(self.horizons)
        if not hs or any(not isinstance(h, (int, np.integer)) or h < 1 for h in hs):
            raise ValueError(f"horizons must be positive integers, got {self.horizons!r}")
        if len(set(hs)) != len(hs):
            raise ValueError(f"horizons must be distinct, got {self.horizons!r}")
        if not self.models:
            raise ValueError("need at least one model")
        ids = [m.model_id for m in self.models]
        if len(set(ids)) != len(ids):
            raise ValueError(f"model ids must be unique, got {ids!r}")
        if self.benchmark_model is not None and self.benchmark_model not in ids:
            raise ValueError(f"benchmark_model {self.benchmark_model!r} is not among the model ids {ids!r}")
        if not self.score_templates:
            raise ValueError("need at least one score template")
        if not isinstance(self.m_predictive, (int, np.integer)) or self.m_predictive < 1:
            raise ValueError(f"m_predictive must be a positive integer, got {self.m_predictive!r}")
        if self.n_vintages is not None and (
            not isinstance(self.n_vintages, (int, np.integer)) or self.n_vintages < 1
        ):
            raise ValueError(f"n_vintages must be a positive integer or None, got {self.n_vintages!r}")
        ids_spec = [t.spec_id() for t in self.score_templates]
        if len(set(ids_spec)) != len(ids_spec):
            raise ValueError(f"score templates must be distinct, got {ids_spec!r}")


@dataclass
class BacktestResult:
    """Scored vintage table in array form.

    ``values[(spec_id, horizon)]`` is an ``(n_vintages, n_models)``
    array (NaN where the model failed), ``failed[horizon]`` the matching
    failure mask, ``realized[horizon]`` the target values and
    ``grids[horizon]`` the shared integration grid.  ``origin_labels``
    and ``target_labels[horizon]`` carry the series index entries of
    the forecast origin and target.
    """

    config: BacktestConfig
    model_ids: tuple[str, ...]
    spec_ids: tuple[str, ...]
    horizons: tuple[int, ...]
    n_vintages: int
    origin_labels: tuple[str, ...]
    target_labels: dict
    realized: dict
    grids: dict
    values: dict
    truncated: dict
    failed: dict
    errors: dict

    def complete_vintages(self, horizon: int) -> np.ndarray:
        """Boolean mask of vintages where every model produced scores."""
        return ~self.failed[horizon].any(axis=1)

    def to_records(self) -> list[dict]:
        """Long-form rows, one per (horizon, vintage, model, spec)."""
        by_template = {t.spec_id(): t for t in self.config.score_templates}
        rows = []
        for h in self.horizons:
            grid = self.grids[h]
            for v in range(self.n_vintages):
                for mi, mid in enumerate(self.model_ids):
                    fail = bool(self.failed[h][v, mi])
                    for sid in self.spec_ids:
                        t = by_template[sid]
                        spec = t.to_spec(grid)
                        rows.append(
                            {
                                "horizon": h,
                                "vintage": v,
                                "origin": self.origin_labels[v],
                                "target": self.target_labels[h][v],
                                "model_id": mid,
                                "spec_id": sid,
                                "score_family": t.family,
                                "c": t.c,
                                "weighting": t.weighting,
                                "scheme": t.scheme,
                                "u_min": grid.u_min,
                                "u_max": grid.u_max,
                                "nodes_per_side": grid.nodes_per_side,
                                "value": None if fail else float(self.values[(sid, h)][v, mi]),
                                "orientation": spec.orientation,
                                "truncation_warning": bool(self.truncated[(sid, h)][v, mi]) if not fail else False,
                                "realized": float(self.realized[h][v]),
                                "failed": fail,
                                "error": self.errors[h].get((v, mid), ""),
                            }
                        )
        return rows


def run_backtest(values, config: BacktestConfig, index: Sequence[str] | None = None) -> BacktestResult:
    """Run the rolling-window comparison.

    Parameters
    ----------
    values : array-like
        The full series, oldest first.
    config : BacktestConfig
    index : sequence of str, optional
        Labels aligned with `values` (e.g. timestamps from a CSV);
        positional labels are generated when omitted.

    The run is a pure function of ``(values, config, index)``: model
    fits and predictive simulations draw from seeds derived from
    ``config.seed``, the vintage and the model id, so reruns match
    exactly.
    """
    y = np.asarray(values, dtype=float)
    if y.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if not np.all(np.isfinite(y)):
        raise ValueError("series must be finite")
    if index is None:
        index = tuple(str(i) for i in range(y.size))
    else:
        index = tuple(str(s) for s in index)
        if len(index) != y.size:
            raise ValueError(f"index has {len(index)} entries for {y.size} observations")

    W = config.window_length
    horizons = tuple(int(h) for h in config.horizons)
    max_h = max(horizons)
    available = y.size - W - max_h + 1
    if available < 1:
        raise ValueError(
            f"series of length {y.size} supports no vintage with window {W} and horizon {max_h}"
        )
    n_vint = available if config.n_vintages is None else min(config.n_vintages, available)

    model_ids = tuple(m.model_id for m in config.models)
    spec_ids = tuple(t.spec_id() for t in config.score_templates)

    draws_store: dict = {}
    failed = {h: np.zeros((n_vint, len(model_ids)), dtype=bool) for h in horizons}
    errors: dict = {h: {} for h in horizons}
    for v in range(n_vint):
        window = y[v : v + W]
        for mi, mc in enumerate(config.models):
            try:
                post = mc.fit(window, derive_seed(config.seed, "fit", v, mc.model_id))
            except Exception as exc:  # noqa: BLE001 - isolate the failing cell
                for h in horizons:
                    failed[h][v, mi] = True
                    errors[h][(v, mc.model_id)] = f"fit: {exc}"
                continue
            for h in horizons:
                try:
                    draws = predictive_draws(
                        post, None, h, config.m_predictive,
                        derive_seed(config.seed, "pred", v, mc.model_id, h),
                    )
                    draws_store[(v, mi, h)] = draws
                except Exception as exc:  # noqa: BLE001
                    failed[h][v, mi] = True
                    errors[h][(v, mc.model_id)] = f"predict: {exc}"

    origin_labels = tuple(index[v + W - 1] for v in range(n_vint))
    target_labels = {h: tuple(index[v + W - 1 + h] for v in range(n_vint)) for h in horizons}
    realized = {h: y[W - 1 + h : W - 1 + h + n_vint].copy() for h in horizons}

    grids = {}
    values_out = {}
    truncated_out = {}
    for h in horizons:
        forecasts = {}
        for v in range(n_vint):
            for mi in range(len(model_ids)):
                if not failed[h][v, mi]:
                    forecasts[(v, mi)] = EmpiricalCdf(draws_store[(v, mi, h)])
        if config.grid is not None:
            grid = QuadratureGrid(config.grid.u_min, config.grid.u_max, config.nodes_per_side)
        elif forecasts:
            grid = default_grid(list(forecasts.values()), realized[h], config.nodes_per_side)
        else:
            span = float(realized[h].max() - realized[h].min()) or 1.0
            grid = QuadratureGrid(
                float(realized[h].min()) - span, float(realized[h].max()) + span, config.nodes_per_side
            )
        grids[h] = grid
        for t in config.score_templates:
            spec = t.to_spec(grid)
            vals = np.full((n_vint, len(model_ids)), np.nan)
            trunc = np.zeros((n_vint, len(model_ids)), dtype=bool)
            for (v, mi), forecast in forecasts.items():
                sv, st = score_batch(forecast, [realized[h][v]], spec)
                vals[v, mi] = sv[0]
                trunc[v, mi] = st[0]
            values_out[(t.spec_id(), h)] = vals
            truncated_out[(t.spec_id(), h)] = trunc

    return BacktestResult(
        config=config,
        model_ids=model_ids,
        spec_ids=spec_ids,
        horizons=horizons,
        n_vintages=n_vint,
        origin_labels=origin_labels,
        target_labels=target_labels,
        realized=realized,
        grids=grids,
        values=values_out,
        truncated=truncated_out,
        failed=failed,
        errors=errors,
    )


@dataclass(frozen=True)
class RankingRow:
    """One model's summary under one scoring rule at one horizon."""

    horizon: int
    spec_id: str
    model_id: str
    n_vintages: int
    avg_score: float
    rank: int
    orientation: str
    dm: DmResult | None


def ranking_report(result: BacktestResult, bandwidth: int | None = None) -> list[RankingRow]:
    """Average scores, ranks and tests against the benchmark.

    Averages are taken over the vintages where every model succeeded,
    so all models face the same realizations.  When a benchmark model
    is configured, each other model is tested against it; DM entries
    are None for the benchmark itself and whenever fewer than 10
    common vintages are available.
    """
    cfg = result.config
    by_template = {t.spec_id(): t for t in cfg.score_templates}
    bench_idx = None
    if cfg.benchmark_model is not None:
        bench_idx = result.model_ids.index(cfg.benchmark_model)
    rows = []
    for h in result.horizons:
        ok = result.complete_vintages(h)
        n_ok = int(ok.sum())
        if n_ok == 0:
            raise ValueError(f"no vintage at horizon {h} has scores for every model")
        for sid in result.spec_ids:
            spec = by_template[sid].to_spec(result.grids[h])
            vals = result.values[(sid, h)][ok]
            avgs = vals.mean(axis=0)
            ranks = rank_models(avgs, spec.orientation)
            for mi, mid in enumerate(result.model_ids):
                dm: DmResult | None = None
                if bench_idx is not None and mi != bench_idx and n_ok >= 10:
                    dm = dm_test(vals[:, mi], vals[:, bench_idx], spec.orientation, bandwidth)
                rows.append(
                    RankingRow(
                        horizon=h,
                        spec_id=sid,
                        model_id=mid,
                        n_vintages=n_ok,
                        avg_score=float(avgs[mi]),
                        rank=int(ranks[mi]),
                        orientation=spec.orientation,
                        dm=dm,
                    )
                )
    return rows


def best_model_trace(result: BacktestResult, spec_id: str, horizon: int) -> list[tuple[int, str, str]]:
    """Per-vintage winner under one rule: (vintage, origin label, model id).

    Vintages where no model produced a score are skipped; ties go to
    the earlier model in the configuration order.
    """
    if spec_id not in result.spec_ids:
        raise ValueError(f"unknown spec_id {spec_id!r}; have {result.spec_ids}")
    if horizon not in result.horizons:
        raise ValueError(f"unknown horizon {horizon!r}; have {result.horizons}")
    template = {t.spec_id(): t for t in result.config.score_templates}[spec_id]
    orientation = template.to_spec(result.grids[horizon]).orientation
    vals = result.values[(spec_id, horizon)]
    out = []
    for v in range(result.n_vintages):
        row = vals[v]
        alive = np.isfinite(row)
        if not alive.any():
            continue
        masked = row.copy()
        masked[~alive] = -np.inf if orientation == "positive" else np.inf
        best = int(np.argmax(masked)) if orientation == "positive" else int(np.argmin(masked))
        out.append((v, result.origin_labels[v], result.model_ids[best]))
    return out


def best_model_frequency(result: BacktestResult, spec_id: str, horizon: int) -> dict[str, float]:
    """Share of vintages each model wins under one rule (all models listed)."""
    trace = best_model_trace(result, spec_id, horizon)
    counts = {mid: 0 for mid in result.model_ids}
    for _, _, mid in trace:
        counts[mid] += 1
    total = max(len(trace), 1)
    return {mid: counts[mid] / total for mid in result.model_ids}
