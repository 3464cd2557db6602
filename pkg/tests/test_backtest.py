import numpy as np
import pytest

from asymscore.backtest import (
    BacktestConfig,
    ModelConfig,
    ScoreSpecTemplate,
    best_model_frequency,
    best_model_trace,
    default_score_templates,
    ranking_report,
    run_backtest,
)
from asymscore.scoring import QuadratureGrid


def simulate_series(T, seed, intercept=0.3, slope=0.6, sigma=1.0):
    rng = np.random.default_rng(seed)
    y = np.empty(T)
    y[0] = intercept / (1.0 - slope)
    for t in range(1, T):
        y[t] = intercept + slope * y[t - 1] + sigma * rng.standard_normal()
    return y


def fast_models():
    return (
        ModelConfig("wn", "ar", lags=(), burn=40, keep=80),
        ModelConfig("ar1", "ar", lags=1, burn=40, keep=80),
    )


def small_config(**overrides):
    kwargs = dict(
        window_length=60,
        horizons=(1, 3),
        models=fast_models(),
        benchmark_model="wn",
        score_templates=(ScoreSpecTemplate("crps"), ScoreSpecTemplate("acps", c=0.9)),
        m_predictive=80,
        seed=11,
        n_vintages=12,
        nodes_per_side=32,
    )
    kwargs.update(overrides)
    return BacktestConfig(**kwargs)


class TestScoreSpecTemplate:
    def test_spec_id_carries_rule_fields(self):
        sid = ScoreSpecTemplate("acps", c=0.25, weighting="quantile", scheme="center").spec_id()
        assert "acps" in sid and "0.25" in sid and "center" in sid

    def test_invalid_fields_rejected_at_construction(self):
        with pytest.raises(ValueError):
            ScoreSpecTemplate("brier")
        with pytest.raises(ValueError):
            ScoreSpecTemplate("acps", c=1.5)

    def test_default_templates(self):
        templates = default_score_templates()
        assert templates[0].family == "crps"
        assert all(t.family == "acps" for t in templates[1:])
        assert len({t.spec_id() for t in templates}) == len(templates)


class TestModelConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            ModelConfig("", "ar")
        with pytest.raises(ValueError):
            ModelConfig("m", "garch")
        with pytest.raises(ValueError):
            ModelConfig("m", "ar", keep=0)


class TestBacktestConfig:
    def test_window_too_short(self):
        with pytest.raises(ValueError, match="window_length"):
            small_config(window_length=29)

    def test_bad_horizons(self):
        with pytest.raises(ValueError, match="horizons"):
            small_config(horizons=(0,))
        with pytest.raises(ValueError, match="distinct"):
            small_config(horizons=(1, 1))

    def test_model_requirements(self):
        with pytest.raises(ValueError, match="at least one model"):
            small_config(models=(), benchmark_model=None)
        with pytest.raises(ValueError, match="unique"):
            small_config(models=(ModelConfig("a", "ar"), ModelConfig("a", "ar", lags=2)))
        with pytest.raises(ValueError, match="benchmark_model"):
            small_config(benchmark_model="missing")

    def test_other_fields(self):
        with pytest.raises(ValueError, match="m_predictive"):
            small_config(m_predictive=0)
        with pytest.raises(ValueError, match="n_vintages"):
            small_config(n_vintages=0)
        with pytest.raises(ValueError, match="score template"):
            small_config(score_templates=())
        with pytest.raises(ValueError, match="distinct"):
            small_config(score_templates=(ScoreSpecTemplate("crps"), ScoreSpecTemplate("crps")))


class TestRunBacktest:
    def setup_method(self):
        self.y = simulate_series(80, 101)
        self.config = small_config()
        self.result = run_backtest(self.y, self.config)

    def test_series_validation(self):
        with pytest.raises(ValueError):
            run_backtest(self.y.reshape(-1, 1), self.config)
        with pytest.raises(ValueError):
            run_backtest(np.full(80, np.nan), self.config)
        with pytest.raises(ValueError, match="index"):
            run_backtest(self.y, self.config, index=["a", "b"])

    def test_too_short_for_any_vintage(self):
        with pytest.raises(ValueError, match="no vintage"):
            run_backtest(self.y[:62], self.config)

    def test_shapes_and_labels(self):
        r = self.result
        assert r.n_vintages == 12
        assert r.model_ids == ("wn", "ar1")
        assert len(r.spec_ids) == 2
        assert r.horizons == (1, 3)
        for h in r.horizons:
            np.testing.assert_array_equal(r.realized[h], self.y[60 - 1 + h : 60 - 1 + h + 12])
            assert len(r.target_labels[h]) == 12
            for sid in r.spec_ids:
                assert r.values[(sid, h)].shape == (12, 2)
                assert np.all(np.isfinite(r.values[(sid, h)]))
        assert r.origin_labels == tuple(str(v + 59) for v in range(12))
        assert not any(r.failed[h].any() for h in r.horizons)

    def test_custom_index_labels(self):
        index = [f"m{t:03d}" for t in range(self.y.size)]
        r = run_backtest(self.y, self.config, index=index)
        assert r.origin_labels[0] == "m059"
        assert r.target_labels[3][0] == "m062"

    def test_rerun_is_identical(self):
        again = run_backtest(self.y, self.config)
        for key, vals in self.result.values.items():
            np.testing.assert_array_equal(vals, again.values[key])
        assert self.result.to_records() == again.to_records()

    def test_to_records_layout(self):
        records = self.result.to_records()
        assert len(records) == 2 * 12 * 2 * 2
        first = records[0]
        assert first["horizon"] == 1 and first["vintage"] == 0
        assert first["failed"] is False and first["error"] == ""
        assert isinstance(first["value"], float)

    def test_vintage_cap_and_full_run(self):
        r_all = run_backtest(self.y, small_config(n_vintages=None))
        assert r_all.n_vintages == 80 - 60 - 3 + 1
        r_over = run_backtest(self.y, small_config(n_vintages=500))
        assert r_over.n_vintages == r_all.n_vintages

    def test_grid_override(self):
        g = QuadratureGrid(-9.0, 9.0, 16)
        r = run_backtest(self.y, small_config(grid=g, nodes_per_side=16))
        for h in r.horizons:
            assert r.grids[h].u_min == -9.0
            assert r.grids[h].u_max == 9.0
            assert r.grids[h].nodes_per_side == 16


class TestFailureIsolation:
    def setup_method(self):
        y = simulate_series(50, 102)
        models = (
            ModelConfig("wn", "ar", lags=(), burn=30, keep=50),
            ModelConfig("deep", "ar", lags=25, burn=30, keep=50),
        )
        self.config = small_config(
            window_length=30, horizons=(1,), models=models, n_vintages=6, m_predictive=50
        )
        self.result = run_backtest(y, self.config)

    def test_failing_model_is_isolated(self):
        r = self.result
        assert np.all(r.failed[1][:, 1])
        assert not np.any(r.failed[1][:, 0])
        assert np.all(np.isnan(r.values[(r.spec_ids[0], 1)][:, 1]))
        assert np.all(np.isfinite(r.values[(r.spec_ids[0], 1)][:, 0]))

    def test_errors_recorded_per_cell(self):
        errs = self.result.errors[1]
        assert len(errs) == 6
        assert all(key[1] == "deep" for key in errs)
        assert all(msg.startswith("fit:") for msg in errs.values())

    def test_ranking_needs_a_complete_vintage(self):
        with pytest.raises(ValueError, match="every model"):
            ranking_report(self.result)

    def test_trace_skips_dead_cells(self):
        trace = best_model_trace(self.result, self.result.spec_ids[0], 1)
        assert len(trace) == 6
        assert all(mid == "wn" for _, _, mid in trace)

    def test_failed_records_have_no_value(self):
        rows = [r for r in self.result.to_records() if r["model_id"] == "deep"]
        assert all(r["failed"] and r["value"] is None and r["error"].startswith("fit:") for r in rows)


class TestRankingReport:
    def setup_method(self):
        self.y = simulate_series(90, 103)
        self.result = run_backtest(self.y, small_config(horizons=(1,), n_vintages=15))

    def test_row_structure(self):
        rows = ranking_report(self.result)
        assert len(rows) == 2 * 2
        for row in rows:
            assert row.n_vintages == 15
            assert row.rank in (1, 2)
            if row.model_id == "wn":
                assert row.dm is None
            else:
                assert row.dm is not None

    def test_avg_matches_manual_mean(self):
        rows = ranking_report(self.result)
        sid = self.result.spec_ids[0]
        manual = self.result.values[(sid, 1)].mean(axis=0)
        by_model = {r.model_id: r for r in rows if r.spec_id == sid}
        assert by_model["wn"].avg_score == pytest.approx(manual[0], rel=1e-12)
        assert by_model["ar1"].avg_score == pytest.approx(manual[1], rel=1e-12)

    def test_ranks_follow_orientation(self):
        for row_pair in (
            [r for r in ranking_report(self.result) if r.spec_id == sid]
            for sid in self.result.spec_ids
        ):
            best = min(row_pair, key=lambda r: r.rank)
            other = max(row_pair, key=lambda r: r.rank)
            if best.orientation == "positive":
                assert best.avg_score >= other.avg_score
            else:
                assert best.avg_score <= other.avg_score

    def test_dm_skipped_below_ten_vintages(self):
        r = run_backtest(self.y, small_config(horizons=(1,), n_vintages=8))
        rows = ranking_report(r)
        assert all(row.dm is None for row in rows)


class TestWinnerSummaries:
    def setup_method(self):
        self.y = simulate_series(90, 104)
        self.result = run_backtest(self.y, small_config(horizons=(1,), n_vintages=10))

    def test_frequency_shares_sum_to_one(self):
        freq = best_model_frequency(self.result, self.result.spec_ids[0], 1)
        assert set(freq) == {"wn", "ar1"}
        assert sum(freq.values()) == pytest.approx(1.0)

    def test_trace_matches_values(self):
        sid = self.result.spec_ids[0]
        trace = best_model_trace(self.result, sid, 1)
        vals = self.result.values[(sid, 1)]
        orientation = ranking_report(self.result)[0]
        for v, origin, mid in trace:
            assert origin == self.result.origin_labels[v]
            row = vals[v]
            idx = self.result.model_ids.index(mid)
            assert row[idx] == row.min() or row[idx] == row.max()

    def test_unknown_keys_rejected(self):
        with pytest.raises(ValueError, match="spec_id"):
            best_model_trace(self.result, "nope", 1)
        with pytest.raises(ValueError, match="horizon"):
            best_model_trace(self.result, self.result.spec_ids[0], 7)
