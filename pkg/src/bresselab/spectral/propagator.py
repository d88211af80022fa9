"""Exact time propagation of Fourier modes.

The mode systems are tiny (8x8 or 10x10) but stiff at large xi, so every
evolution goes through the exponential of the full matrix: an eigenbasis when
it is well conditioned, scaling-and-squaring otherwise.
"""

import logging

import numpy as np
import scipy.linalg

from bresselab.errors import EigenFailure, NonFiniteResult
from bresselab.models.grid import FloatArray
from bresselab.models.parameters import Parameters, SystemKind
from bresselab.models.state import ComplexArray, Generator, ModeState, Trajectory
from bresselab.spectral.generator import Coupling, build_generator

logger = logging.getLogger(__name__)

# Eigenvector condition number above which the eigenbasis is not trusted
EIGEN_CONDITION_LIMIT = 1e8


def _check_finite(values: ComplexArray, xi: float) -> None:
    if not np.all(np.isfinite(values)):
        raise NonFiniteResult(f"propagation overflowed at xi={xi}")


def propagate(g: Generator, u0: ModeState, t: float) -> ModeState:
    """exp(t A) u0 by scaling-and-squaring Pade."""
    if t < 0:
        raise ValueError("propagation time must be nonnegative")
    if u0.kind is not g.kind or u0.xi != g.xi:
        raise ValueError("state and generator belong to different modes")
    if t == 0:
        return u0
    u = scipy.linalg.expm(t * g.matrix) @ u0.u
    _check_finite(u, g.xi)
    return ModeState(kind=g.kind, xi=g.xi, u=u)


class Propagator:
    """exp(t A) for many times from one factorization of A."""

    def __init__(self, g: Generator) -> None:
        self.generator = g
        self._eig: tuple[ComplexArray, ComplexArray, ComplexArray] | None = None
        try:
            values, vectors = scipy.linalg.eig(g.matrix)
        except (np.linalg.LinAlgError, ValueError):
            values = None
        if values is not None and np.all(np.isfinite(values)):
            cond = np.linalg.cond(vectors)
            if np.isfinite(cond) and cond < EIGEN_CONDITION_LIMIT:
                self._eig = (values, vectors, np.linalg.inv(vectors))
        logger.debug(
            "xi=%g: %s propagator",
            g.xi,
            "eigenbasis" if self._eig is not None else "scaling-and-squaring",
        )

    @property
    def uses_eigenbasis(self) -> bool:
        return self._eig is not None

    def states(self, u0: ComplexArray, times: FloatArray) -> ComplexArray:
        """States at ``times`` for each initial state (rows of ``u0``).

        Returns shape (n_times, n_states, dim).
        """
        u0 = np.atleast_2d(np.asarray(u0, dtype=np.complex128))
        if self._eig is not None:
            values, vectors, inverse = self._eig
            coeffs = u0 @ inverse.T
            phases = np.exp(np.outer(times, values))
            out = np.einsum("ij,tj,sj->tsi", vectors, phases, coeffs)
        else:
            blocks = scipy.linalg.expm(np.asarray(times)[:, None, None] * self.generator.matrix)
            out = np.einsum("tij,sj->tsi", blocks, u0)
        out[np.asarray(times) == 0.0] = u0
        _check_finite(out, self.generator.xi)
        return np.asarray(out, dtype=np.complex128)


def sample_times(t_max: float, n: int, t_min: float = 1e-2) -> FloatArray:
    """``n`` times: 0 followed by log-spaced samples in [t_min, t_max]."""
    if n <= 1:
        return np.zeros(1)
    return np.concatenate([[0.0], np.geomspace(t_min, t_max, n - 1)])


def evolve_batch(g: Generator, u0: ComplexArray, times: FloatArray) -> list[Trajectory]:
    """One trajectory per row of ``u0``, all sharing a single factorization."""
    times = np.asarray(times, dtype=float)
    states = Propagator(g).states(u0, times)
    return [
        Trajectory(xi=g.xi, kind=g.kind, times=times, u=states[:, s, :], generator=g)
        for s in range(states.shape[1])
    ]


def evolve_trajectory(
    p: Parameters,
    kind: SystemKind,
    xi: float,
    u0: ModeState,
    times: FloatArray,
    flipped: Coupling | None = None,
) -> Trajectory:
    """Trajectory of ``u0`` under A(xi) sampled at ``times`` (starting at 0)."""
    if u0.kind is not kind or u0.xi != xi:
        raise ValueError("initial state does not match the requested mode")
    g = build_generator(p, kind, xi, flipped)
    return evolve_batch(g, u0.u[None, :], times)[0]


def spectral_abscissa(g: Generator) -> float:
    """Largest real part among the eigenvalues of A(xi)."""
    try:
        values = scipy.linalg.eigvals(g.matrix)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise EigenFailure(f"eigenvalues did not converge at xi={g.xi}: {e}") from e
    if not np.all(np.isfinite(values)):
        raise EigenFailure(f"non-finite eigenvalues at xi={g.xi}")
    return float(np.max(values.real))
