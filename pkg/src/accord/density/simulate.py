"""Monte Carlo sampling of one-round winners with reproducible streams.

Trials run in fixed-size batches, each on its own child stream spawned
from the root seed sequence, so results are bit-identical whether the
batches execute sequentially or in parallel, in any order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..voting.rounds import Scheme
from .analytic import DensityModel, analytic_moments, bin_averages, bin_probabilities
from .histogram import Histogram

# Trials per spawned stream; the stream split, not the loop, defines the result.
BATCH_TRIALS = 1 << 18

_MODEL_FOR_SCHEME = {
    Scheme.TRIADIC: DensityModel.TRIADIC_WINNER,
    Scheme.HOT_OR_NOT: DensityModel.HOT_OR_NOT_WINNER,
}


@dataclass(frozen=True)
class FitReport:
    """How an empirical winner histogram compares with its reference density."""

    scheme: str
    trials: int
    bins: int
    seed: int
    l1: float
    max_z: float
    mean: float
    variance: float
    analytic_mean: float
    analytic_variance: float


@dataclass(frozen=True)
class MomentReport:
    """Empirical winner moments with standard-error bounds."""

    scheme: str
    trials: int
    seed: int
    mean: float
    mean_se: float
    variance: float
    variance_se: float


@dataclass(frozen=True)
class DensityRun:
    """A sampling run: the histogram, the per-bin reference values, the fit."""

    histogram: Histogram
    reference: tuple[float, ...]
    report: FitReport


def sample_winners(scheme: Scheme, trials: int, seed) -> np.ndarray:
    """Winner positions from `trials` independent one-round simulations.

    Each trial draws three positions uniformly. Triadic: the median wins.
    Hot-or-not: the first two are the candidates and the third judges,
    choosing the closer one; which point judges matters, which is exactly
    the role asymmetry that splits the two winner densities.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    batches = -(-trials // BATCH_TRIALS)
    winners = np.empty(trials)
    for index, child in enumerate(root.spawn(batches)):
        rng = np.random.default_rng(child)
        lo = index * BATCH_TRIALS
        hi = min(trials, lo + BATCH_TRIALS)
        points = rng.random((hi - lo, 3))
        if scheme is Scheme.TRIADIC:
            winners[lo:hi] = np.median(points, axis=1)
        else:
            a, b, judge = points[:, 0], points[:, 1], points[:, 2]
            winners[lo:hi] = np.where(np.abs(judge - a) < np.abs(judge - b), a, b)
    return winners


def sample_winner_density(scheme: Scheme, trials: int, bins: int, seed: int) -> DensityRun:
    """Sample winners, bin them, and report the fit against the closed form."""
    if not trials >= bins >= 1:
        raise ValueError(f"need trials >= bins >= 1, got trials={trials} bins={bins}")
    winners = sample_winners(scheme, trials, seed)
    histogram = Histogram.from_samples(winners, bins)
    model = _MODEL_FOR_SCHEME[scheme]
    reference = bin_averages(model, histogram.edges)
    probabilities = bin_probabilities(model, histogram.edges)
    counts = np.asarray(histogram.counts, dtype=float)
    expected = trials * probabilities
    spread = np.sqrt(expected * (1.0 - probabilities))
    z = np.divide(counts - expected, spread, out=np.zeros(bins), where=spread > 0)
    mean, variance = analytic_moments(model)
    report = FitReport(
        scheme=scheme.value,
        trials=trials,
        bins=bins,
        seed=seed,
        l1=float(np.mean(np.abs(histogram.densities - reference))),
        max_z=float(np.max(np.abs(z))),
        mean=float(winners.mean()),
        variance=float(winners.var()),
        analytic_mean=mean,
        analytic_variance=variance,
    )
    return DensityRun(histogram=histogram, reference=tuple(float(r) for r in reference), report=report)


def verify_mixture_identity(trials: int, bins: int, seed: int) -> DensityRun:
    """Check that hot-or-not winners empirically match half triadic plus half uniform.

    Both schemes are sampled on independent child streams of the given seed;
    the report's L1 is between the hot-or-not histogram and the mixture of
    the empirical triadic histogram with the uniform density.
    """
    if not trials >= bins >= 1:
        raise ValueError(f"need trials >= bins >= 1, got trials={trials} bins={bins}")
    child_triadic, child_hon = np.random.SeedSequence(seed).spawn(2)
    triadic = Histogram.from_samples(sample_winners(Scheme.TRIADIC, trials, child_triadic), bins)
    hon_winners = sample_winners(Scheme.HOT_OR_NOT, trials, child_hon)
    hon = Histogram.from_samples(hon_winners, bins)
    mixture = 0.5 * triadic.densities + 0.5
    hon_densities = hon.densities

    # Noise on the difference combines both samplers' binomial errors.
    p_hon = bin_probabilities(DensityModel.HOT_OR_NOT_WINNER, hon.edges)
    p_tri = bin_probabilities(DensityModel.TRIADIC_WINNER, hon.edges)
    se = bins * np.sqrt((p_hon * (1 - p_hon) + 0.25 * p_tri * (1 - p_tri)) / trials)
    z = np.divide(hon_densities - mixture, se, out=np.zeros(bins), where=se > 0)

    mean, variance = analytic_moments(DensityModel.HOT_OR_NOT_WINNER)
    report = FitReport(
        scheme="mixture",
        trials=trials,
        bins=bins,
        seed=seed,
        l1=float(np.mean(np.abs(hon_densities - mixture))),
        max_z=float(np.max(np.abs(z))),
        mean=float(hon_winners.mean()),
        variance=float(hon_winners.var()),
        analytic_mean=mean,
        analytic_variance=variance,
    )
    return DensityRun(histogram=hon, reference=tuple(float(m) for m in mixture), report=report)


def moment_report(scheme: Scheme, trials: int, seed: int) -> MomentReport:
    """Empirical mean and variance of winner positions with standard errors."""
    if trials < 2:
        raise ValueError("trials must be >= 2")
    winners = sample_winners(scheme, trials, seed)
    mean = float(winners.mean())
    variance = float(winners.var(ddof=1))
    centered = winners - mean
    fourth = float(np.mean(centered ** 4))
    return MomentReport(
        scheme=scheme.value,
        trials=trials,
        seed=seed,
        mean=mean,
        mean_se=float(np.sqrt(variance / trials)),
        variance=variance,
        variance_se=float(np.sqrt(max(fourth - variance**2, 0.0) / trials)),
    )
