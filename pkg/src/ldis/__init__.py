"""Importance sampling for random-walk large deviations: rate functions,
limiting estimator exponents, exact oracles and a reproducible Monte Carlo
engine."""
from .distributions import Exponential, FiniteDiscrete, Gaussian, Mixture
from .events import EventSet
from .limits import PathMixture
from .mc_engine import SampleSchedule, mixture_run, run_cell, sweep

__version__ = "0.1.0"

__all__ = [
    "EventSet",
    "Exponential",
    "FiniteDiscrete",
    "Gaussian",
    "Mixture",
    "PathMixture",
    "SampleSchedule",
    "mixture_run",
    "run_cell",
    "sweep",
]
