"""Data models for bresselab."""

from bresselab.models.config import ExperimentConfig, LyapunovConfig, default_lyapunov_config
from bresselab.models.grid import FrequencyGrid, band_grid, default_grid
from bresselab.models.parameters import (
    Parameters,
    SpeedClass,
    SystemKind,
    classify_speeds,
    validate,
)
from bresselab.models.reports import (
    BoundReport,
    EnvelopeFit,
    NormReport,
    PropositionReport,
    RateReport,
    ResidualReport,
)
from bresselab.models.state import Generator, ModeState, Trajectory

__all__ = [
    "BoundReport",
    "EnvelopeFit",
    "ExperimentConfig",
    "FrequencyGrid",
    "Generator",
    "LyapunovConfig",
    "ModeState",
    "NormReport",
    "Parameters",
    "PropositionReport",
    "RateReport",
    "ResidualReport",
    "SpeedClass",
    "SystemKind",
    "Trajectory",
    "band_grid",
    "classify_speeds",
    "default_grid",
    "default_lyapunov_config",
    "validate",
]
