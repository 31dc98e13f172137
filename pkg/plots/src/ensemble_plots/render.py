"""Batch figure renderers: histogram overlays, parameter maps, path overlays."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .density import chi_square_statistic, normalized_curve
from .io import read_params_file, read_sample_file

_COLORS = {
    "AIII_III": "tab:red",
    "CI_II": "tab:blue",
    "DI_III": "tab:green",
    "BDI_I": "tab:red",
    "AI_III": "tab:blue",
    "CII_II": "tab:red",
    "AII_III": "tab:green",
}


@dataclass
class PlotJob:
    inputs: Sequence[str]
    kind: str  # histogram_density | parameter_map | cross_path_overlay
    output: str
    column: int = 0
    bins: int = 60


def render(job: PlotJob):
    if job.kind == "histogram_density":
        return render_histogram(job)
    if job.kind == "parameter_map":
        return render_parameter_map(job)
    if job.kind == "cross_path_overlay":
        return render_cross_path_overlay(job)
    raise ValueError(f"unknown plot kind {job.kind!r}")


def render_histogram(job: PlotJob):
    """Normalized histogram of one order statistic with the density overlay.

    For single-coordinate ensembles the exact rank-1 density is drawn and a
    chi-square bin statistic is printed and returned; multi-coordinate files
    get the histogram alone (their marginals are not re-derived here).
    """
    sample = read_sample_file(job.inputs[0])
    data = sample.spectra[:, job.column]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.hist(data, bins=job.bins, density=True, alpha=0.55, color="tab:gray",
            label=f"{sample.family} samples (N={data.size})")
    chi = None
    if sample.m == 1:
        xs, pdf = normalized_curve(sample)
        ax.plot(xs, pdf, "k-", lw=1.4, label="reference density")
        stat, dof, crit = chi_square_statistic(sample, job.column)
        chi = (stat, dof, crit)
        print(f"chi-square: statistic={stat:.2f} dof={dof} critical(0.01)={crit:.2f} "
              f"{'OK' if stat < crit else 'EXCEEDS'}")
    ax.set_xlabel("coordinate")
    ax.set_ylabel("density")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(job.output, dpi=110)
    plt.close(fig)
    return chi


def render_parameter_map(job: PlotJob, clip: Optional[float] = None):
    """Scatter of (alpha1, alpha2) colored by space type (the figure-map data)."""
    params = read_params_file(job.inputs[0])
    fig, ax = plt.subplots(figsize=(5.4, 5.0))
    by_space = {}
    for row in params.rows:
        by_space.setdefault(row["space"], []).append((row["alpha1"], row["alpha2"]))
    for space, pts in sorted(by_space.items()):
        arr = np.array(pts)
        ax.scatter(arr[:, 0], arr[:, 1], s=18, label=space,
                   color=_COLORS.get(space), alpha=0.85)
    bound = clip
    if bound is None and by_space:
        bound = 1.0 + max(max(a for a, _ in pts) for pts in by_space.values())
    if bound is not None:
        ax.set_xlim(-1.0, bound)
        ax.set_ylim(-1.0, bound)
    ax.set_xlabel(r"$\alpha_1$")
    ax.set_ylabel(r"$\alpha_2$")
    ax.axhline(-1.0, color="k", lw=0.5)
    ax.axvline(-1.0, color="k", lw=0.5)
    if by_space:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(job.output, dpi=110)
    plt.close(fig)
    return len(params.rows)


def render_cross_path_overlay(job: PlotJob):
    """Step histograms of the same coordinate from two sampler-path files."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for path in job.inputs:
        sample = read_sample_file(path)
        ax.hist(sample.spectra[:, job.column], bins=job.bins, density=True,
                histtype="step", lw=1.3, label=path.rsplit("/", 1)[-1])
    ax.set_xlabel("coordinate")
    ax.set_ylabel("density")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(job.output, dpi=110)
    plt.close(fig)
