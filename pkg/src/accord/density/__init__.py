"""Monte Carlo winner-density verification for the comparison voting schemes."""

from .analytic import (
    DensityModel,
    analytic_cdf,
    analytic_density,
    analytic_moments,
    bin_averages,
    bin_probabilities,
    triadic_winner_density,
)
from .histogram import Histogram
from .simulate import (
    BATCH_TRIALS,
    DensityRun,
    FitReport,
    MomentReport,
    moment_report,
    sample_winner_density,
    sample_winners,
    verify_mixture_identity,
)

__all__ = [
    "BATCH_TRIALS",
    "DensityModel",
    "DensityRun",
    "FitReport",
    "Histogram",
    "MomentReport",
    "analytic_cdf",
    "analytic_density",
    "analytic_moments",
    "bin_averages",
    "bin_probabilities",
    "moment_report",
    "sample_winner_density",
    "sample_winners",
    "triadic_winner_density",
    "verify_mixture_identity",
]
