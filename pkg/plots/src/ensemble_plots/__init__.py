"""Batch figure generation for ensemble-forge output files."""

from .render import PlotJob, render

__version__ = "0.1.0"

__all__ = ["PlotJob", "render", "__version__"]
