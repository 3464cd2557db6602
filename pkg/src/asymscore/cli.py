"""Command-line interface.

Subcommands
-----------
score     score a forecast against realizations
simulate  run a canned forecast-comparison experiment
compare   test two score files for equal predictive accuracy
backtest  rolling-origin model comparison driven by a YAML config
pit       probability integral transforms with a histogram summary

Exit codes: 0 on success, 2 for usage or input validation problems,
1 for unexpected runtime failures.  Diagnostics go to stderr; data go
to stdout or to the requested output files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from asymscore.backtest import (
    DEFAULT_C_LEVELS,
    MODEL_KINDS,
    BacktestConfig,
    ModelConfig,
    ScoreSpecTemplate,
    best_model_frequency,
    best_model_trace,
    default_score_templates,
    ranking_report,
    run_backtest,
)
from asymscore.distributions import Beta, EmpiricalCdf, Gamma, Normal, StudentT
from asymscore.experiments import EXPERIMENTS, run_experiment
from asymscore.inference import dm_test, pit
from asymscore.io import (
    read_draws_csv,
    read_records_csv,
    read_series_csv,
    records_to_csv,
    records_to_json,
)
from asymscore.models import NigPrior, TvpArSpec
from asymscore.scoring import (
    WEIGHT_SCHEMES,
    QuadratureGrid,
    ScoreSpec,
    default_grid,
    score_batch,
)

SCORE_FIELDS = [
    "model_id", "index", "score_family", "c", "weighting", "scheme",
    "u_min", "u_max", "nodes_per_side", "value", "orientation",
    "truncation_warning",
]
DM_FIELDS = [
    "model_1", "model_2", "score_family", "c", "weighting", "scheme",
    "u_min", "u_max", "nodes_per_side", "n_obs", "mean_diff", "lrv",
    "bandwidth", "statistic", "p_value", "stars",
]
RANKING_FIELDS = [
    "horizon", "spec_id", "score_family", "c", "weighting", "scheme",
    "model_id", "n_vintages", "avg_score", "rank", "orientation",
    "dm_statistic", "dm_p_value", "dm_stars",
]
VINTAGE_FIELDS = [
    "horizon", "vintage", "origin", "target", "model_id", "spec_id",
    "score_family", "c", "weighting", "scheme", "u_min", "u_max",
    "nodes_per_side", "value", "orientation", "truncation_warning",
    "realized", "failed", "error",
]
TRACE_FIELDS = ["horizon", "spec_id", "vintage", "origin", "model_id"]
FREQUENCY_FIELDS = ["horizon", "spec_id", "model_id", "share", "wins", "n_vintages"]
EXPERIMENT_FIELDS = [
    "experiment", "spec_id", "score_family", "c", "weighting", "scheme",
    "candidate", "avg_score", "rank", "orientation", "u_min", "u_max",
    "nodes_per_side", "n_obs",
]
PIT_FIELDS = ["index", "pit"]
PIT_HIST_FIELDS = ["bin_low", "bin_high", "count", "frequency"]

_ANALYTIC_ARITY = {"normal": 2, "student-t": 3, "gamma": 2, "beta": 2}


def parse_analytic(text: str):
    """Build a distribution from a compact spec such as ``normal:0,1``.

    Families: ``normal:mean,variance``, ``student-t:loc,scale,df``,
    ``gamma:shape,rate``, ``beta:a,b``.
    """
    name, sep, rest = text.partition(":")
    name = name.strip().lower()
    if name not in _ANALYTIC_ARITY:
        raise ValueError(
            f"unknown analytic family {name!r}; choose from {sorted(_ANALYTIC_ARITY)}"
        )
    if not sep:
        raise ValueError(f"analytic spec {text!r} is missing parameters")
    try:
        params = [float(p) for p in rest.split(",")]
    except ValueError:
        raise ValueError(f"analytic spec {text!r} has non-numeric parameters") from None
    if len(params) != _ANALYTIC_ARITY[name]:
        raise ValueError(
            f"{name} takes {_ANALYTIC_ARITY[name]} parameters, got {len(params)}"
        )
    if name == "normal":
        return Normal(params[0], params[1])
    if name == "student-t":
        return StudentT(params[0], params[1], params[2])
    if name == "gamma":
        return Gamma(params[0], params[1])
    return Beta(params[0], params[1])


def _load_forecast(args):
    if args.forecast_analytic is not None:
        dist = parse_analytic(args.forecast_analytic)
        default_id = dist.label()
    else:
        draws = read_draws_csv(args.forecast_draws)
        dist = EmpiricalCdf(draws)
        default_id = Path(args.forecast_draws).stem
    model_id = args.model_id if args.model_id else default_id
    return dist, model_id


def _resolve_grid(args, forecast, observations):
    has_min = args.umin is not None
    has_max = args.umax is not None
    if has_min != has_max:
        raise ValueError("--umin and --umax must be given together")
    if has_min:
        return QuadratureGrid(args.umin, args.umax, nodes_per_side=args.nodes)
    return default_grid([forecast], observations, nodes_per_side=args.nodes)


def _emit(args, records, fieldnames):
    text = (
        records_to_json(records, fieldnames)
        if args.format == "json"
        else records_to_csv(records, fieldnames)
    )
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _spec_fields(spec: ScoreSpec) -> dict:
    return {
        "score_family": spec.family,
        "c": spec.c if spec.family == "acps" else None,
        "weighting": spec.weighting,
        "scheme": spec.scheme if spec.weighting != "none" else None,
        "u_min": spec.grid.u_min,
        "u_max": spec.grid.u_max,
        "nodes_per_side": spec.grid.nodes_per_side,
    }


def cmd_score(args) -> int:
    forecast, model_id = _load_forecast(args)
    observations = read_draws_csv(args.realizations)
    grid = _resolve_grid(args, forecast, observations)

    if args.family == "crps" and args.c:
        raise ValueError("--c only applies to the acps family")
    if args.weighting == "none" and args.scheme != "uniform":
        raise ValueError("--scheme requires --weighting threshold or quantile")

    c_levels = args.c if args.c else [0.5]
    if args.family == "crps":
        specs = [ScoreSpec("crps", weighting=args.weighting, scheme=args.scheme, grid=grid)]
    else:
        specs = [
            ScoreSpec("acps", c=c, weighting=args.weighting, scheme=args.scheme, grid=grid)
            for c in c_levels
        ]

    records = []
    for spec in specs:
        values, truncated = score_batch(forecast, observations, spec)
        base = _spec_fields(spec)
        for i, v in enumerate(values):
            rec = {"model_id": model_id, "index": i, **base,
                   "value": v, "orientation": spec.orientation,
                   "truncation_warning": bool(truncated[i])}
            records.append(rec)
    if any(r["truncation_warning"] for r in records):
        print(
            "warning: some realizations fall outside the integration "
            "range; scores at those points are truncated",
            file=sys.stderr,
        )
    _emit(args, records, SCORE_FIELDS)
    return 0


def cmd_simulate(args) -> int:
    result = run_experiment(
        args.experiment,
        n_obs=args.n,
        seed=args.seed,
        m_draws=args.m_draws,
        c_levels=tuple(args.c) if args.c else DEFAULT_C_LEVELS,
        nodes_per_side=args.nodes,
    )
    records = result.to_records()
    print(
        f"experiment {args.experiment}: {args.n} observations, "
        f"{len(result.candidate_labels)} candidates, "
        f"{len(records)} score rows",
        file=sys.stderr,
    )
    _emit(args, records, EXPERIMENT_FIELDS)
    return 0


_COMPARE_KEYS = [
    "score_family", "c", "weighting", "scheme", "u_min", "u_max",
    "nodes_per_side", "orientation",
]


def _load_score_file(path):
    rows = read_records_csv(path)
    if not rows:
        raise ValueError(f"{path}: no score rows")
    missing = [k for k in _COMPARE_KEYS + ["index", "value", "model_id"] if k not in rows[0]]
    if missing:
        raise ValueError(f"{path}: missing columns {missing}; not a score file?")
    keys = {tuple(r[k] for k in _COMPARE_KEYS) for r in rows}
    if len(keys) > 1:
        raise ValueError(
            f"{path}: contains {len(keys)} distinct score definitions; "
            "filter to a single one before comparing"
        )
    model_ids = {r["model_id"] for r in rows}
    if len(model_ids) > 1:
        raise ValueError(f"{path}: contains multiple model ids {sorted(model_ids)}")
    index = [r["index"] for r in rows]
    values = np.asarray([float(r["value"]) for r in rows])
    return rows[0], index, values, model_ids.pop()


def cmd_compare(args) -> int:
    meta1, index1, values1, id1 = _load_score_file(args.scores_1)
    meta2, index2, values2, id2 = _load_score_file(args.scores_2)
    for key in _COMPARE_KEYS:
        if meta1[key] != meta2[key]:
            raise ValueError(
                f"score definitions differ: {key} is {meta1[key]!r} in "
                f"{args.scores_1} but {meta2[key]!r} in {args.scores_2}"
            )
    if index1 != index2:
        raise ValueError("score files do not cover the same observation index")
    result = dm_test(values1, values2, meta1["orientation"], bandwidth=args.bandwidth)
    rec = {
        "model_1": id1,
        "model_2": id2,
        "score_family": meta1["score_family"],
        "c": float(meta1["c"]) if meta1["c"] else None,
        "weighting": meta1["weighting"],
        "scheme": meta1["scheme"] or None,
        "u_min": float(meta1["u_min"]),
        "u_max": float(meta1["u_max"]),
        "nodes_per_side": int(meta1["nodes_per_side"]),
        "n_obs": result.n_obs,
        "mean_diff": result.mean_diff,
        "lrv": result.lrv,
        "bandwidth": result.bandwidth,
        "statistic": result.statistic,
        "p_value": result.p_value,
        "stars": result.stars,
    }
    if result.mean_diff == 0:
        verdict = "no sample difference"
    else:
        verdict = f"sample favors {id2 if result.mean_diff > 0 else id1}"
    print(
        f"dm statistic {result.statistic:+.4f}, p-value {result.p_value:.4f} "
        f"{result.stars or '(ns)'}; {verdict}",
        file=sys.stderr,
    )
    _emit(args, [rec], DM_FIELDS)
    return 0


def _config_get(cfg, errors, key, default=None, required=False):
    if key in cfg:
        return cfg.pop(key)
    if required:
        errors.append(f"missing required key {key!r}")
    return default


def _parse_score_specs(raw, errors):
    if raw is None:
        return default_score_templates()
    if not isinstance(raw, list) or not raw:
        errors.append("score_specs must be a non-empty list")
        return default_score_templates()
    templates = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            errors.append(f"score_specs[{i}] must be a mapping")
            continue
        item = dict(item)
        family = item.pop("family", None)
        if family not in ("acps", "crps"):
            errors.append(f"score_specs[{i}].family must be 'acps' or 'crps'")
            continue
        c = item.pop("c", 0.5)
        weighting = item.pop("weighting", "none")
        scheme = item.pop("scheme", "uniform")
        if item:
            errors.append(f"score_specs[{i}] has unknown keys {sorted(item)}")
            continue
        try:
            templates.append(ScoreSpecTemplate(family, c=float(c), weighting=weighting, scheme=scheme))
        except (TypeError, ValueError) as exc:
            errors.append(f"score_specs[{i}]: {exc}")
    return tuple(templates)


def _parse_model(raw, i, errors):
    if not isinstance(raw, dict):
        errors.append(f"models[{i}] must be a mapping")
        return None
    raw = dict(raw)
    model_id = raw.pop("id", None)
    if not isinstance(model_id, str) or not model_id:
        errors.append(f"models[{i}] needs a non-empty string 'id'")
        return None
    kind = raw.pop("kind", None)
    if kind not in MODEL_KINDS:
        errors.append(f"models[{i}] ({model_id}): kind must be one of {MODEL_KINDS}")
        return None
    lags = raw.pop("lags", 1)
    if isinstance(lags, list):
        lags = tuple(lags)
    intercept = raw.pop("intercept", True)
    mcmc = raw.pop("mcmc", {}) or {}
    if not isinstance(mcmc, dict):
        errors.append(f"models[{i}] ({model_id}): mcmc must be a mapping")
        return None
    burn = mcmc.pop("burn", 500)
    keep = mcmc.pop("keep", 1000)
    thin = mcmc.pop("thin", 1)
    if mcmc:
        errors.append(f"models[{i}] ({model_id}): mcmc has unknown keys {sorted(mcmc)}")
        return None

    prior = NigPrior()
    raw_prior = raw.pop("prior", None)
    if raw_prior is not None:
        if not isinstance(raw_prior, dict):
            errors.append(f"models[{i}] ({model_id}): prior must be a mapping")
            return None
        extra = set(raw_prior) - {"coeff_mean", "coeff_cov", "sigma_shape", "sigma_rate"}
        if extra:
            errors.append(f"models[{i}] ({model_id}): prior has unknown keys {sorted(extra)}")
            return None
        prior = NigPrior(**{k: float(v) for k, v in raw_prior.items()})

    transition_prior = raw.pop("transition_prior", ((1.0, 1.0), (1.0, 1.0)))
    if isinstance(transition_prior, list):
        transition_prior = tuple(tuple(float(x) for x in row) for row in transition_prior)

    tvp_spec = None
    raw_tvp = raw.pop("tvp", None)
    if raw_tvp is not None:
        if kind != "tvpar":
            errors.append(f"models[{i}] ({model_id}): 'tvp' only applies to kind tvpar")
            return None
        if not isinstance(raw_tvp, dict):
            errors.append(f"models[{i}] ({model_id}): tvp must be a mapping")
            return None
        allowed = {
            "state_mean", "state_cov", "a_mean_diag", "a_cov",
            "omega_scale", "omega_dof", "sigma_shape", "sigma_rate",
        }
        extra = set(raw_tvp) - allowed
        if extra:
            errors.append(f"models[{i}] ({model_id}): tvp has unknown keys {sorted(extra)}")
            return None
        lag_value = lags if isinstance(lags, int) else max(lags) if lags else 1
        try:
            tvp_spec = TvpArSpec(lags=lag_value, **{k: float(v) for k, v in raw_tvp.items()})
        except (TypeError, ValueError) as exc:
            errors.append(f"models[{i}] ({model_id}): {exc}")
            return None

    if raw:
        errors.append(f"models[{i}] ({model_id}): unknown keys {sorted(raw)}")
        return None
    try:
        return ModelConfig(
            model_id=model_id, kind=kind, lags=lags, intercept=bool(intercept),
            prior=prior, transition_prior=transition_prior, tvp_spec=tvp_spec,
            burn=int(burn), keep=int(keep), thin=int(thin),
        )
    except (TypeError, ValueError) as exc:
        errors.append(f"models[{i}] ({model_id}): {exc}")
        return None


def load_backtest_config(path, seed_override=None) -> BacktestConfig:
    """Parse and validate a YAML backtest config, reporting every
    problem found rather than stopping at the first."""
    import yaml

    with Path(path).open("r", encoding="utf-8") as fh:
        try:
            cfg = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ValueError(f"{path}: invalid YAML: {exc}") from None
    if not isinstance(cfg, dict):
        raise ValueError(f"{path}: top level must be a mapping")
    cfg = dict(cfg)
    errors: list[str] = []

    window_length = _config_get(cfg, errors, "window_length", required=True)
    horizons = _config_get(cfg, errors, "horizons", required=True)
    seed = _config_get(cfg, errors, "seed", default=0)
    m_predictive = _config_get(cfg, errors, "m_predictive", default=500)
    n_vintages = _config_get(cfg, errors, "n_vintages")
    nodes_per_side = _config_get(cfg, errors, "nodes_per_side", default=128)
    benchmark_model = _config_get(cfg, errors, "benchmark_model")
    raw_grid = _config_get(cfg, errors, "grid")
    raw_specs = _config_get(cfg, errors, "score_specs")
    raw_models = _config_get(cfg, errors, "models", required=True)
    if cfg:
        errors.append(f"unknown top-level keys {sorted(cfg)}")

    grid = None
    if raw_grid is not None:
        if (not isinstance(raw_grid, dict)
                or set(raw_grid) != {"u_min", "u_max"}):
            errors.append("grid must be a mapping with keys u_min and u_max")
        else:
            try:
                grid = QuadratureGrid(
                    float(raw_grid["u_min"]), float(raw_grid["u_max"]),
                    nodes_per_side=int(nodes_per_side),
                )
            except (TypeError, ValueError) as exc:
                errors.append(f"grid: {exc}")

    templates = _parse_score_specs(raw_specs, errors)

    models = []
    if raw_models is not None:
        if not isinstance(raw_models, list) or not raw_models:
            errors.append("models must be a non-empty list")
        else:
            for i, raw in enumerate(raw_models):
                model = _parse_model(raw, i, errors)
                if model is not None:
                    models.append(model)

    if window_length is not None and not (
        isinstance(window_length, int) and not isinstance(window_length, bool) and window_length >= 30
    ):
        errors.append(f"window_length must be an integer >= 30, got {window_length!r}")
        window_length = None

    if isinstance(horizons, int) and not isinstance(horizons, bool):
        horizons = (horizons,)
    elif isinstance(horizons, list):
        horizons = tuple(horizons)
    if horizons is not None:
        bad = (
            not isinstance(horizons, tuple)
            or not horizons
            or any(not isinstance(h, int) or isinstance(h, bool) or h < 1 for h in horizons)
        )
        if bad:
            errors.append(f"horizons must be a positive integer or a non-empty list of them, got {horizons!r}")
            horizons = None
        elif len(set(horizons)) != len(horizons):
            errors.append(f"horizons must be distinct, got {list(horizons)!r}")
            horizons = None

    config = None
    if not errors and window_length is not None and horizons is not None and models:
        try:
            config = BacktestConfig(
                window_length=int(window_length),
                horizons=horizons,
                models=tuple(models),
                benchmark_model=benchmark_model,
                score_templates=templates,
                m_predictive=int(m_predictive),
                seed=int(seed) if seed_override is None else int(seed_override),
                n_vintages=None if n_vintages is None else int(n_vintages),
                nodes_per_side=int(nodes_per_side),
                grid=grid,
            )
        except (TypeError, ValueError) as exc:
            errors.append(str(exc))
            config = None
    if errors:
        listing = "\n".join(f"  - {e}" for e in errors)
        raise ValueError(f"{path}: configuration problems:\n{listing}")
    return config


def _ranking_records(rows, spec_of):
    records = []
    for row in rows:
        dm = row.dm
        template = spec_of[row.spec_id]
        records.append({
            "horizon": row.horizon,
            "spec_id": row.spec_id,
            "score_family": template.family,
            "c": template.c if template.family == "acps" else None,
            "weighting": template.weighting,
            "scheme": template.scheme if template.weighting != "none" else None,
            "model_id": row.model_id,
            "n_vintages": row.n_vintages,
            "avg_score": row.avg_score,
            "rank": row.rank,
            "orientation": row.orientation,
            "dm_statistic": None if dm is None else dm.statistic,
            "dm_p_value": None if dm is None else dm.p_value,
            "dm_stars": None if dm is None else dm.stars,
        })
    return records


def cmd_backtest(args) -> int:
    config = load_backtest_config(args.config, seed_override=args.seed)
    labels, values = read_series_csv(args.series)
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    result = run_backtest(values, config, index=labels)
    report = ranking_report(result, bandwidth=args.bandwidth)

    spec_of = {t.spec_id(): t for t in config.score_templates}
    vintage_records = result.to_records()
    ranking_records = _ranking_records(report, spec_of)
    trace_records = []
    freq_records = []
    for h in config.horizons:
        for spec_id in spec_of:
            for vintage, origin, model_id in best_model_trace(result, spec_id, h):
                trace_records.append({
                    "horizon": h, "spec_id": spec_id, "vintage": vintage,
                    "origin": origin, "model_id": model_id,
                })
            shares = best_model_frequency(result, spec_id, h)
            n_vint = len(result.complete_vintages(h))
            for model_id, share in shares.items():
                freq_records.append({
                    "horizon": h, "spec_id": spec_id, "model_id": model_id,
                    "share": share, "wins": round(share * n_vint),
                    "n_vintages": n_vint,
                })

    suffix = "json" if args.format == "json" else "csv"
    render = records_to_json if args.format == "json" else records_to_csv
    outputs = {
        f"vintage_table.{suffix}": (vintage_records, VINTAGE_FIELDS),
        f"ranking_report.{suffix}": (ranking_records, RANKING_FIELDS),
        f"best_model_trace.{suffix}": (trace_records, TRACE_FIELDS),
        f"best_model_frequency.{suffix}": (freq_records, FREQUENCY_FIELDS),
    }
    for name, (records, fields) in outputs.items():
        (out_dir / name).write_text(render(records, fields), encoding="utf-8")

    n_failed = sum(len(v) for v in result.errors.values())
    print(
        f"backtest complete: {len(values)} observations, "
        f"{len(config.models)} models, horizons {list(config.horizons)}, "
        f"{n_failed} failed fits; wrote {len(outputs)} files to {out_dir}",
        file=sys.stderr,
    )
    for h in config.horizons:
        for (v, mid), msg in sorted(result.errors.get(h, {}).items()):
            print(f"warning: horizon {h} vintage {v} model {mid}: {msg}", file=sys.stderr)
    return 0


def cmd_pit(args) -> int:
    observations = read_draws_csv(args.realizations)
    if args.forecast_analytic is not None:
        dist = parse_analytic(args.forecast_analytic)
        pits = np.array([pit(dist, y) for y in observations])
    else:
        draw_dir = Path(args.forecast_draws_dir)
        if not draw_dir.is_dir():
            raise ValueError(f"{draw_dir} is not a directory")
        files = sorted(p for p in draw_dir.iterdir() if p.suffix == ".csv")
        if len(files) != observations.size:
            raise ValueError(
                f"{draw_dir} holds {len(files)} draw files but there are "
                f"{observations.size} realizations"
            )
        pits = np.array([
            pit(EmpiricalCdf(read_draws_csv(f)), y)
            for f, y in zip(files, observations)
        ])

    pit_records = [{"index": i, "pit": p} for i, p in enumerate(pits)]
    counts, edges = np.histogram(pits, bins=np.arange(11) / 10.0)
    hist_records = [
        {"bin_low": edges[i], "bin_high": edges[i + 1],
         "count": int(counts[i]), "frequency": counts[i] / pits.size}
        for i in range(10)
    ]
    if args.format == "json":
        text = json.dumps(
            {
                "pits": [float(p) for p in pits],
                "histogram": [
                    {k: (float(r[k]) if k != "count" else r[k]) for k in PIT_HIST_FIELDS}
                    for r in hist_records
                ],
            },
            indent=2,
        ) + "\n"
    else:
        text = (
            records_to_csv(pit_records, PIT_FIELDS)
            + "\n"
            + records_to_csv(hist_records, PIT_HIST_FIELDS)
        )
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _add_output_args(p):
    p.add_argument("--output", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="output format (default: csv)")


def _add_forecast_args(p):
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--forecast-draws", metavar="PATH",
        help="single-column CSV of predictive draws (no header)",
    )
    group.add_argument(
        "--forecast-analytic", metavar="SPEC",
        help="analytic forecast, e.g. normal:0,1 student-t:0,1,5 gamma:2,1 beta:1,2",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asymscore",
        description="Density forecast evaluation under asymmetric preferences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score a forecast against realizations")
    _add_forecast_args(p)
    p.add_argument("--realizations", required=True, metavar="PATH",
                   help="single-column CSV of realized values (no header)")
    p.add_argument("--family", choices=("acps", "crps"), default="acps")
    p.add_argument("--c", action="append", type=float, metavar="C",
                   help="asymmetry level, repeatable (default: 0.5)")
    p.add_argument("--weighting", choices=("none", "threshold", "quantile"),
                   default="none")
    p.add_argument("--scheme", choices=WEIGHT_SCHEMES, default="uniform")
    p.add_argument("--umin", type=float, help="integration range lower edge")
    p.add_argument("--umax", type=float, help="integration range upper edge")
    p.add_argument("--nodes", type=int, default=128,
                   help="quadrature nodes per side (default: 128)")
    p.add_argument("--model-id", help="label for the output rows")
    _add_output_args(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("simulate", help="run a canned forecast-comparison experiment")
    p.add_argument("--experiment", choices=sorted(EXPERIMENTS), required=True)
    p.add_argument("--n", type=int, default=20000, help="observations (default: 20000)")
    p.add_argument("--m-draws", type=int, default=None,
                   help="approximate candidates by this many draws (default: analytic)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--c", action="append", type=float, metavar="C",
                   help="asymmetry level, repeatable (default: canned levels)")
    p.add_argument("--nodes", type=int, default=128)
    _add_output_args(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="test two score files for equal accuracy")
    p.add_argument("scores_1", metavar="SCORES_1", help="score CSV for model 1")
    p.add_argument("scores_2", metavar="SCORES_2", help="score CSV for model 2")
    p.add_argument("--bandwidth", type=int, default=None,
                   help="fixed lag window (default: automatic)")
    _add_output_args(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("backtest", help="rolling-origin model comparison")
    p.add_argument("--series", required=True, metavar="PATH",
                   help="two-column CSV (header row, then label,value)")
    p.add_argument("--config", required=True, metavar="PATH", help="YAML config")
    p.add_argument("--output-dir", required=True, metavar="DIR")
    p.add_argument("--seed", type=int, default=None, help="override config seed")
    p.add_argument("--bandwidth", type=int, default=None,
                   help="lag window for the accuracy tests (default: automatic)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_backtest)

    p = sub.add_parser("pit", help="probability integral transforms")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--forecast-analytic", metavar="SPEC",
                       help="one analytic forecast used for every realization")
    group.add_argument("--forecast-draws-dir", metavar="DIR",
                       help="directory of per-period draw CSVs, sorted by name")
    p.add_argument("--realizations", required=True, metavar="PATH")
    _add_output_args(p)
    p.set_defaults(func=cmd_pit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 130
    except Exception as exc:  # pragma: no cover - defensive
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
