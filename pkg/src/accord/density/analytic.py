"""Closed-form winner densities for one voting round over uniform voters.

With voters uniform on [0, 1], the density of position x surviving one
round is 6x(1-x) for the triadic scheme and 3x(1-x) + 1/2 for hot-or-not;
the latter is the even mixture of the former with the uniform density.
For a general voter density f with cumulative F, the triadic winner
density is 6 f(x) F(x) (1 - F(x)); only the uniform case is wired into
the samplers and acceptance checks.
"""

from __future__ import annotations

from enum import Enum

import numpy as np


class DensityModel(Enum):
    UNIFORM = "uniform"
    TRIADIC_WINNER = "triadic"
    HOT_OR_NOT_WINNER = "hotornot"


def _check_domain(x):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("density argument outside [0, 1]")
    return arr


def analytic_density(model: DensityModel, x):
    """Exact density value(s) at x in [0, 1]; accepts scalars or arrays."""
    arr = _check_domain(x)
    if model is DensityModel.UNIFORM:
        out = np.ones_like(arr)
    elif model is DensityModel.TRIADIC_WINNER:
        out = 6.0 * arr * (1.0 - arr)
    else:
        out = 3.0 * arr * (1.0 - arr) + 0.5
    return float(out) if np.isscalar(x) else out


def analytic_cdf(model: DensityModel, x):
    """Exact cumulative distribution at x in [0, 1]."""
    arr = _check_domain(x)
    if model is DensityModel.UNIFORM:
        out = arr.copy()
    elif model is DensityModel.TRIADIC_WINNER:
        out = arr * arr * (3.0 - 2.0 * arr)
    else:
        out = 1.5 * arr * arr - arr ** 3 + 0.5 * arr
    return float(out) if np.isscalar(x) else out


def analytic_moments(model: DensityModel) -> tuple[float, float]:
    """(mean, variance) of the model; every scheme is symmetric about 1/2."""
    variance = {
        DensityModel.UNIFORM: 1.0 / 12.0,
        DensityModel.TRIADIC_WINNER: 0.05,
        DensityModel.HOT_OR_NOT_WINNER: 1.0 / 15.0,
    }[model]
    return 0.5, variance


def bin_probabilities(model: DensityModel, edges: np.ndarray) -> np.ndarray:
    """Exact probability mass in each [edges[i], edges[i+1]) bin."""
    cdf = analytic_cdf(model, np.asarray(edges, dtype=float))
    return np.diff(cdf)


def bin_averages(model: DensityModel, edges: np.ndarray) -> np.ndarray:
    """Exact average density over each bin (mass divided by width)."""
    edges = np.asarray(edges, dtype=float)
    return bin_probabilities(model, edges) / np.diff(edges)


def triadic_winner_density(f, cumulative, x):
    """General-f one-round triadic winner density 6 f(x) F(x) (1 - F(x))."""
    arr = _check_domain(x)
    out = 6.0 * np.asarray(f(arr), dtype=float)
    out = out * np.asarray(cumulative(arr), dtype=float)
    out = out * (1.0 - np.asarray(cumulative(arr), dtype=float))
    return float(out) if np.isscalar(x) else out
