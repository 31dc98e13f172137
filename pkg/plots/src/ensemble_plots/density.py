"""Rank-1 reference densities for overlay curves and chi-square bin tests.

Independent re-implementation of the single-coordinate joint densities (the
m = 1 case), normalized numerically on a geometrically graded grid so that
endpoint-singular weights integrate accurately.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np

from .io import SampleFile


def _exponents(sample: SampleFile) -> Tuple[float, float, float, float]:
    """(lo, hi, left power a1, right power a2) of the rank-1 weight."""
    beta, dims = sample.beta, sample.dims
    if sample.family == "jacobi":
        p, q, s = dims["p"], dims["q"], dims["s"]
        return 0.0, 1.0, beta * (q - s + 1) / 2.0 - 1.0, beta * (p - s + 1) / 2.0 - 1.0
    if sample.family == "laguerre":
        p, q = dims["p"], dims["q"]
        return 0.0, 60.0, beta * (p - q + 1) / 2.0 - 1.0, 0.0
    if sample.family == "hermite":
        return -8.0, 8.0, 0.0, 0.0
    return 0.0, 2.0 * np.pi, 0.0, 0.0


def weight(sample: SampleFile, x: np.ndarray) -> np.ndarray:
    """Unnormalized rank-1 density at x (zero outside the support)."""
    lo, hi, a1, a2 = _exponents(sample)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    if sample.family == "jacobi":
        inside = (x > 0) & (x < 1)
        out[inside] = x[inside] ** a1 * (1.0 - x[inside]) ** a2
    elif sample.family == "laguerre":
        inside = x > 0
        out[inside] = x[inside] ** a1 * np.exp(-0.5 * x[inside])
    elif sample.family == "hermite":
        out = np.exp(-0.5 * x**2)
    else:
        out = np.where((x >= 0) & (x < 2 * np.pi), 1.0 / (2.0 * np.pi), 0.0)
    return out


def _graded_grid(lo, hi, a1, a2, n=4001) -> np.ndarray:
    """Grid refined toward endpoints whose weight exponent is negative."""
    mid = 0.5 * (lo + hi)
    if -1.0 < a1 < 0.0:
        left = lo + (mid - lo) * np.logspace(-12, 0, n // 2)
    else:
        left = np.linspace(lo, mid, n // 2)
    if -1.0 < a2 < 0.0:
        right = hi - (hi - mid) * np.logspace(-12, 0, n // 2)[::-1]
    else:
        right = np.linspace(mid, hi, n // 2)
    return np.unique(np.concatenate([[lo], left, [mid], right, [hi]]))


def normalized_curve(sample: SampleFile, points: int = 600):
    """(x, pdf) on a plot-friendly grid, normalized to unit mass."""
    lo, hi, a1, a2 = _exponents(sample)
    grid = _graded_grid(lo, hi, a1, a2)
    dens = weight(sample, grid)
    # endpoint slivers of singular weights: analytic mass x^{a} -> x^{1+a}/(1+a)
    mass = float(np.trapezoid(dens, grid))
    if -1.0 < a1 < 0.0:
        eps = grid[grid > lo][0] - lo
        mass += eps ** (1.0 + a1) / (1.0 + a1)
    if -1.0 < a2 < 0.0:
        eps = hi - grid[grid < hi][-1]
        mass += eps ** (1.0 + a2) / (1.0 + a2)
    xs = np.linspace(lo, hi, points)
    return xs, weight(sample, xs) / mass


def bin_probabilities(sample: SampleFile, edges: np.ndarray) -> np.ndarray:
    """Probability mass of each histogram bin under the reference density."""
    lo, hi, a1, a2 = _exponents(sample)
    grid = _graded_grid(lo, hi, a1, a2, n=20001)
    dens = weight(sample, grid)
    cdf_grid = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(grid))])
    if -1.0 < a1 < 0.0:
        eps = grid[1] - lo
        cdf_grid[1:] += eps ** (1.0 + a1) / (1.0 + a1)
    if -1.0 < a2 < 0.0:
        eps = hi - grid[-2]
        cdf_grid[-1] += eps ** (1.0 + a2) / (1.0 + a2)
    cdf_grid /= cdf_grid[-1]
    vals = np.interp(np.clip(edges, lo, hi), grid, cdf_grid)
    return np.diff(vals)


def chi_square_statistic(sample: SampleFile, column: int = 0, bins: int = 40):
    """(statistic, dof, critical_0.01) for histogram-vs-density agreement.

    Bins are quantile-based on the data with expected counts >= 5 enforced by
    construction (equal-probability bins under the empirical law).
    """
    from scipy.stats import chi2

    data = np.sort(sample.spectra[:, column])
    n = data.size
    bins = min(bins, max(n // 50, 5))
    edges = np.quantile(data, np.linspace(0.0, 1.0, bins + 1))
    edges[0], edges[-1] = -np.inf, np.inf
    lo, hi, _, _ = _exponents(sample)
    edges = np.clip(edges, lo, hi)
    edges = np.unique(edges)
    observed, _ = np.histogram(data, bins=edges)
    expected = bin_probabilities(sample, edges) * n
    keep = expected > 5
    stat = float(np.sum((observed[keep] - expected[keep]) ** 2 / expected[keep]))
    dof = int(np.sum(keep)) - 1
    return stat, dof, float(chi2.ppf(0.99, dof))
