"""Generator matrices and exact propagation of Fourier modes."""

from bresselab.spectral.generator import Coupling, Rows, build_generator
from bresselab.spectral.propagator import (
    Propagator,
    evolve_batch,
    evolve_trajectory,
    propagate,
    sample_times,
    spectral_abscissa,
)

__all__ = [
    "Coupling",
    "Propagator",
    "Rows",
    "build_generator",
    "evolve_batch",
    "evolve_trajectory",
    "propagate",
    "sample_times",
    "spectral_abscissa",
]
