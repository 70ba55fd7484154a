"""Scenario configuration, experiment orchestration and reporting."""

from .config import EnsembleSweep, ExperimentSpec, GridSweep, load_experiment
from .experiments import run_ccdf, run_heatmap, run_single

__all__ = [
    "EnsembleSweep",
    "ExperimentSpec",
    "GridSweep",
    "load_experiment",
    "run_ccdf",
    "run_heatmap",
    "run_single",
]
