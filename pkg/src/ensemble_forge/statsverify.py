"""Statistical verification: KS tests, quadrature CDFs, moment summaries.

Turns density claims into pass/fail checks: one- and two-sample
Kolmogorov-Smirnov statistics with asymptotic thresholds, numerically
integrated marginal CDFs for rank-1 and rank-2 ensembles (with endpoint
substitutions for the singular Jacobi/Laguerre weights), and Monte Carlo
moment estimates with jackknife standard errors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np

from .errors import ContractError, DomainError
from .ensembles import EnsembleSpec, Family, SampleBatch

__all__ = [
    "KsResult",
    "NumericCdf",
    "numeric_marginal_cdf",
    "ks_one_sample",
    "ks_two_sample",
    "moment_summary",
]


@dataclass
class KsResult:
    statistic: float
    n_samples: int
    p_value: float
    passed: bool
    alpha: float
    threshold: float


@dataclass
class NumericCdf:
    """Tabulated CDF on an ascending grid, monotone-cubic interpolated."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.grid) <= 0):
            raise ContractError("CDF grid must be strictly ascending")
        if np.any(np.diff(self.values) < -1e-12):
            raise ContractError("CDF values must be nondecreasing")
        if abs(self.values[-1] - 1.0) > 1e-8:
            raise ContractError("CDF endpoint must be 1")
        from scipy.interpolate import PchipInterpolator

        vals = np.maximum.accumulate(np.asarray(self.values, dtype=float))
        object.__setattr__(self, "_interp", PchipInterpolator(self.grid, vals))

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        lo, hi = self.grid[0], self.grid[-1]
        out = np.clip(self._interp(np.clip(x, lo, hi)), 0.0, 1.0)
        out = np.where(x < lo, 0.0, np.where(x > hi, 1.0, out))
        return out


# ---------------------------------------------------------------------------
# quadrature machinery

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
_X_MIN = 1e-13


def _panel_edges(spec: EnsembleSpec) -> Tuple[float, float, float, float]:
    """(lo, hi, left_power, right_power): support and endpoint weight powers."""
    fam = spec.family
    if fam is Family.Jacobi:
        cp = spec.classical()
        return 0.0, 1.0, cp.alpha1, cp.alpha2
    if fam is Family.Laguerre:
        alpha = spec.classical().alpha
        hi = 40.0 + 6.0 * max(alpha, 0.0) + 10.0 * spec.m
        return 0.0, hi, alpha, 0.0
    if fam is Family.Hermite:
        return -8.5, 8.5, 0.0, 0.0
    return 0.0, 2.0 * np.pi, 0.0, 0.0


def _segment_edges(a, b, power, panels, from_left):
    """Panel edges on [a, b], geometrically graded toward a singular endpoint.

    ``power`` is the weight exponent at the endpoint (a if from_left else b);
    a negative power gets a geometric mesh down to _X_MIN * (b - a).  The
    leftover sliver next to the endpoint is integrated analytically via
    ``_endpoint_lump``.
    """
    if -1.0 < power < 0.0:
        span = b - a
        offs = span * np.logspace(np.log10(_X_MIN), 0.0, panels + 1)
        if from_left:
            return np.concatenate([[a], a + offs])
        return np.concatenate([(b - offs)[::-1], [b]])
    return np.linspace(a, b, panels + 1)


def _endpoint_lump(power, eps):
    """integral_0^eps u^power du for the analytically-added singular sliver.

    The smooth cofactor of the weight equals 1 at the support endpoints for
    every classical family, so no extra factor appears.
    """
    if -1.0 < power < 0.0:
        return eps ** (1.0 + power) / (1.0 + power)
    return 0.0


def _quad_layout(lo, hi, left_pow, right_pow, panels, gl_order=16):
    """(grid, nodes, weights, lump_left, lump_right) over the support.

    ``grid`` includes lo and hi.  Nodes/weights integrate weight-times-smooth
    integrands panel by panel between grid[1 if left sliver else 0] and
    grid[-2 if right sliver else -1]; the slivers' masses are the lumps.
    """
    gl_n, gl_w = np.polynomial.legendre.leggauss(gl_order)
    mid = 0.5 * (lo + hi)
    half = max(panels // 2, 8)
    left = _segment_edges(lo, mid, left_pow, half, from_left=True)
    right = _segment_edges(mid, hi, right_pow, half, from_left=False)
    grid = np.concatenate([left, right[1:]])
    sliver_l = -1.0 < left_pow < 0.0
    sliver_r = -1.0 < right_pow < 0.0
    lump_l = _endpoint_lump(left_pow, grid[1] - lo) if sliver_l else 0.0
    lump_r = _endpoint_lump(right_pow, hi - grid[-2]) if sliver_r else 0.0
    panel_edges = grid[(1 if sliver_l else 0) : len(grid) - (1 if sliver_r else 0)]
    widths = np.diff(panel_edges)
    centers = 0.5 * (panel_edges[:-1] + panel_edges[1:])
    nodes = (centers[:, None] + 0.5 * widths[:, None] * gl_n[None, :]).reshape(-1)
    weights = (0.5 * widths[:, None] * gl_w[None, :]).reshape(-1)
    return grid, nodes, weights, lump_l, lump_r


def _weight_1d(spec: EnsembleSpec, x: np.ndarray) -> np.ndarray:
    """Single-coordinate weight function of the joint density (vectorized)."""
    fam = spec.family
    with np.errstate(divide="ignore", invalid="ignore"):
        if fam is Family.Hermite:
            return np.exp(-0.5 * x**2)
        if fam is Family.Laguerre:
            alpha = spec.classical().alpha
            out = np.zeros_like(x)
            pos = x > 0
            out[pos] = x[pos] ** alpha * np.exp(-0.5 * x[pos])
            return out
        if fam is Family.Jacobi:
            cp = spec.classical()
            inside = (x > 0) & (x < 1)
            out = np.zeros_like(x)
            out[inside] = x[inside] ** cp.alpha1 * (1.0 - x[inside]) ** cp.alpha2
            return out
        return np.ones_like(x)


def numeric_marginal_cdf(
    spec: EnsembleSpec, coordinate: str = "min", grid_size: int = 12000
) -> NumericCdf:
    """Quadrature CDF of an order statistic for a rank-1 or rank-2 ensemble.

    ``coordinate`` is "min" or "max" (identical at m = 1), or "spacing" for
    the circular m = 2 minimum gap.  ``grid_size`` counts quadrature panels;
    doubling it changes values by < 1e-6 (the convergence invariant).
    Endpoint-singular weights (alphas in (-1, 0)) use geometrically graded
    panels plus an analytic sliver integral at the endpoint.
    """
    if spec.m not in (1, 2):
        raise DomainError("numeric_marginal_cdf supports m = 1 or 2 only")
    if coordinate not in ("min", "max", "spacing"):
        raise DomainError(f"unknown coordinate {coordinate!r}")
    lo, hi, lpow, rpow = _panel_edges(spec)
    if lpow <= -1.0 or rpow <= -1.0:
        raise DomainError("density is not integrable (alpha <= -1)")
    if spec.m == 1:
        grid, x, w, lump_l, lump_r = _quad_layout(lo, hi, lpow, rpow, grid_size)
        f = w * _weight_1d(spec, x)
        vals = _prefix_at_edges(grid, x, f, lump_l, lump_r)
        return NumericCdf(grid, vals / vals[-1])
    if coordinate == "spacing":
        if spec.family is not Family.Circular:
            raise DomainError("spacing coordinate is defined for circular m=2")
        edges = np.linspace(0.0, np.pi, grid_size + 1)
        widths = np.diff(edges)
        centers = 0.5 * (edges[:-1] + edges[1:])
        xn = centers[:, None] + 0.5 * widths[:, None] * _GL_NODES[None, :]
        xw = 0.5 * widths[:, None] * _GL_WEIGHTS[None, :]
        dens = np.sum(xw * np.abs(np.exp(1j * xn) - 1.0) ** spec.beta, axis=1)
        vals = np.concatenate([[0.0], np.cumsum(dens)])
        return NumericCdf(edges, vals / vals[-1])
    return _order_statistic_cdf_2d(spec, coordinate, lo, hi, lpow, rpow, grid_size)


def _order_statistic_cdf_2d(spec, coordinate, lo, hi, lpow, rpow, grid_size):
    """Min/max CDF for m = 2 by tensor quadrature with streaming prefixes.

    The endpoint slivers are dropped here (their pair-density mass is
    O(eps^{1+alpha} * weight-integral), far below the 2-d tolerance).
    """
    panels = min(max(grid_size, 64), 1200)
    grid, x, w, _, _ = _quad_layout(lo, hi, lpow, rpow, panels, gl_order=8)
    wx = w * _weight_1d(spec, x)
    zx = np.exp(1j * x) if spec.family is Family.Circular else None
    idx = np.searchsorted(x, grid, side="right")
    # cum-over-y of the pair density at every grid point, per x node
    row_at_edges = np.empty((x.size, grid.size))
    zero_col = np.zeros((1,))
    for k0 in range(0, x.size, 128):
        k1 = min(k0 + 128, x.size)
        if zx is not None:
            rows = np.abs(zx[k0:k1, None] - zx[None, :]) ** spec.beta
        else:
            rows = np.abs(x[k0:k1, None] - x[None, :]) ** spec.beta
        rows *= wx[k0:k1, None] * wx[None, :]
        cums = np.concatenate([np.zeros((k1 - k0, 1)), np.cumsum(rows, axis=1)], axis=1)
        row_at_edges[k0:k1] = cums[:, idx]
    cum_x = np.concatenate(
        [np.zeros((1, grid.size)), np.cumsum(row_at_edges, axis=0)], axis=0
    )
    both = cum_x[idx]  # both[i, j] = mass(x <= grid_i, y <= grid_j)
    total = both[-1, -1]
    diag = np.diagonal(both)
    if coordinate == "max":
        vals = diag / total
    else:
        vals = 1.0 - (total - both[:, -1] - both[-1, :] + diag) / total
    vals = np.maximum.accumulate(np.clip(vals, 0.0, 1.0))
    vals[-1] = 1.0
    return NumericCdf(grid, vals.copy())


def _prefix_at_edges(edges, x, f, lump_l=0.0, lump_r=0.0):
    idx = np.searchsorted(x, edges, side="right")
    cum = np.concatenate([[0.0], np.cumsum(f)])
    vals = cum[idx]
    vals[1:] += lump_l
    vals[-1] += lump_r
    vals[0] = 0.0
    return vals


# ---------------------------------------------------------------------------
# KS tests


def _as_cdf_values(cdf, samples):
    vals = cdf(samples) if callable(cdf) else np.asarray(cdf)
    return np.asarray(vals, dtype=float)


def ks_one_sample(
    samples: np.ndarray,
    cdf: Union[NumericCdf, Callable],
    alpha: float = 0.01,
) -> KsResult:
    """One-sample KS test against a reference CDF (asymptotic threshold).

    ``samples`` must be sorted ascending; pass iff the sup statistic stays
    below sqrt(-ln(alpha/2) / (2 N)).
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 1 or samples.size < 100:
        raise ContractError("need at least 100 samples in a 1-d array")
    if np.any(np.diff(samples) < 0):
        raise ContractError("samples must be sorted ascending")
    n = samples.size
    f = _as_cdf_values(cdf, samples)
    i = np.arange(1, n + 1)
    d = float(np.max(np.maximum(np.abs(f - i / n), np.abs(f - (i - 1) / n))))
    threshold = float(np.sqrt(-np.log(alpha / 2.0) / (2.0 * n)))
    p = float(np.clip(2.0 * np.exp(-2.0 * n * d * d), 0.0, 1.0))
    return KsResult(d, n, p, d <= threshold, alpha, threshold)


def ks_two_sample(a: np.ndarray, b: np.ndarray, alpha: float = 0.01) -> KsResult:
    """Two-sample KS test with the asymptotic threshold at level alpha."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size < 100 or b.size < 100:
        raise ContractError("need at least 100 samples on both sides")
    if np.any(np.diff(a) < 0) or np.any(np.diff(b) < 0):
        raise ContractError("samples must be sorted ascending")
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    d = float(np.max(np.abs(fa - fb)))
    n_eff = a.size * b.size / (a.size + b.size)
    threshold = float(np.sqrt(-np.log(alpha / 2.0) / (2.0 * n_eff)))
    p = float(np.clip(2.0 * np.exp(-2.0 * n_eff * d * d), 0.0, 1.0))
    return KsResult(d, int(min(a.size, b.size)), p, d <= threshold, alpha, threshold)


# ---------------------------------------------------------------------------
# moments


def moment_summary(
    batch: SampleBatch, powers: Sequence[int]
) -> List[Tuple[int, float, float]]:
    """Monte Carlo estimates of E[sum_j x_j^power] with jackknife errors."""
    if batch.draws < 2:
        raise ContractError("need at least two draws")
    out = []
    for power in powers:
        t = np.sum(batch.spectra**power, axis=1)
        n = t.size
        mean = float(np.mean(t))
        loo = (np.sum(t) - t) / (n - 1)
        se = float(np.sqrt((n - 1) / n * np.sum((loo - np.mean(loo)) ** 2)))
        out.append((int(power), mean, se))
    return out
