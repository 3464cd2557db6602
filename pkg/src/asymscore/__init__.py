"""Tools for scoring and comparing density forecasts under asymmetric preferences."""

from asymscore.distributions import Beta, EmpiricalCdf, Gamma, Normal, StudentT
from asymscore.scoring import (
    QuadratureGrid,
    ScoreSpec,
    acps,
    average_score,
    crps,
    default_grid,
    rank_models,
    weighted_score,
)
from asymscore.inference import dm_test, pit

__version__ = "0.1.0"

__all__ = [
    "Beta",
    "EmpiricalCdf",
    "Gamma",
    "Normal",
    "StudentT",
    "QuadratureGrid",
    "ScoreSpec",
    "acps",
    "average_score",
    "crps",
    "default_grid",
    "rank_models",
    "weighted_score",
    "dm_test",
    "pit",
]
