"""Bayesian time-series models producing posterior predictive draws."""

from asymscore.models.ar import ArPosterior, ArSpec, fit_ar
from asymscore.models.common import McmcConfig, NigPrior
from asymscore.models.msar import MsArPosterior, MsArSpec, fit_msar
from asymscore.models.predict import predictive_draws
from asymscore.models.tvpar import TvpArPosterior, TvpArSpec, fit_tvpar

__all__ = [
    "ArPosterior",
    "ArSpec",
    "fit_ar",
    "McmcConfig",
    "NigPrior",
    "MsArPosterior",
    "MsArSpec",
    "fit_msar",
    "predictive_draws",
    "TvpArPosterior",
    "TvpArSpec",
    "fit_tvpar",
]
