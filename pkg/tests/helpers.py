"""Helpers shared by the test modules."""

import numpy as np

from bresselab.envelopes import envelope_times
from bresselab.models.parameters import Parameters, SystemKind, classify_speeds
from bresselab.models.state import Trajectory
from bresselab.spectral.generator import build_generator
from bresselab.spectral.propagator import evolve_batch, sample_times

FREQUENCIES = (0.1, 1.0, 10.0)


def random_states(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    return rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))


def sampled_trajectories(
    p: Parameters,
    kind: SystemKind,
    rng: np.random.Generator,
    xis: tuple[float, ...] = FREQUENCIES,
    n_states: int = 8,
    n_times: int = 8,
    t_max: float = 20.0,
) -> list[Trajectory]:
    """Random initial states evolved at every xi."""
    times = sample_times(t_max, n_times)
    out: list[Trajectory] = []
    for xi in xis:
        g = build_generator(p, kind, xi)
        out += evolve_batch(g, random_states(rng, n_states, kind.dim), times)
    return out


def envelope_trajectories(
    p: Parameters,
    kind: SystemKind,
    rng: np.random.Generator,
    xis: np.ndarray,
    n_states: int = 2,
) -> list[Trajectory]:
    speeds = classify_speeds(p)
    out: list[Trajectory] = []
    for xi in xis:
        g = build_generator(p, kind, float(xi))
        times = envelope_times(float(xi), speeds)
        out += evolve_batch(g, random_states(rng, n_states, kind.dim), times)
    return out
