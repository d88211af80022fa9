"""Fourier-mode states, generators and trajectories."""

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from bresselab.errors import NonFiniteResult
from bresselab.models.grid import FloatArray
from bresselab.models.parameters import SystemKind

ComplexArray = NDArray[np.complex128]

# Component names in state order
TYPE_I_LAYOUT = ("phi", "phi_t", "psi", "psi_t", "omega", "omega_t", "theta1", "theta2")
TYPE_III_LAYOUT = (
    "phi", "phi_t", "psi", "psi_t", "omega", "omega_t",
    "theta1", "theta1_t", "theta2", "theta2_t",
)


def layout(kind: SystemKind) -> tuple[str, ...]:
    """Component names of a ``kind`` state, in vector order."""
    return TYPE_I_LAYOUT if kind is SystemKind.TYPE_I else TYPE_III_LAYOUT


def slot(kind: SystemKind, name: str) -> int:
    """Index of component ``name`` in a ``kind`` state."""
    return layout(kind).index(name)


@dataclass(frozen=True)
class ModeState:
    """State of one Fourier mode."""

    kind: SystemKind
    xi: float
    u: ComplexArray

    def __post_init__(self) -> None:
        u = np.asarray(self.u, dtype=np.complex128)
        if u.shape != (self.kind.dim,):
            raise ValueError(
                f"{self.kind.label} state needs {self.kind.dim} components, got {u.shape}"
            )
        if not np.all(np.isfinite(u)):
            raise NonFiniteResult(f"non-finite mode state at xi={self.xi}")
        object.__setattr__(self, "u", u)

    @classmethod
    def zero(cls, kind: SystemKind, xi: float) -> "ModeState":
        return cls(kind=kind, xi=xi, u=np.zeros(kind.dim, dtype=np.complex128))

    @classmethod
    def unit(cls, kind: SystemKind, xi: float, index: int) -> "ModeState":
        u = np.zeros(kind.dim, dtype=np.complex128)
        u[index] = 1.0
        return cls(kind=kind, xi=xi, u=u)

    def component(self, name: str) -> complex:
        return complex(self.u[slot(self.kind, name)])

    def conjugate_mode(self) -> "ModeState":
        """The mode at -xi carrying the conjugate state (real physical data)."""
        return ModeState(kind=self.kind, xi=-self.xi, u=np.conj(self.u))


@dataclass(frozen=True)
class Generator:
    """Matrix of the first-order mode system dU/dt = A(xi) U."""

    xi: float
    kind: SystemKind
    matrix: ComplexArray
    flipped: str | None = None  # name of a sign-flipped coupling term, if any

    def apply(self, u: ComplexArray) -> ComplexArray:
        """A(xi) applied to a state or to a stack of states (last axis)."""
        return np.asarray(u @ self.matrix.T, dtype=np.complex128)


@dataclass(frozen=True)
class Trajectory:
    """Exact mode evolution sampled at increasing times starting from 0.

    ``u`` stacks the states row by row; ``energies`` stays empty until the
    functionals module attaches them.
    """

    xi: float
    kind: SystemKind
    times: FloatArray
    u: ComplexArray
    generator: Generator
    energies: FloatArray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self) -> None:
        if self.times.ndim != 1 or self.times.size == 0 or self.times[0] != 0.0:
            raise ValueError("trajectory times must be a nonempty 1-D array starting at 0")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory times must be strictly increasing")
        if self.u.shape != (self.times.size, self.kind.dim):
            raise ValueError("trajectory states do not match times/kind")

    def __len__(self) -> int:
        return int(self.times.size)

    @property
    def states(self) -> list[ModeState]:
        return [ModeState(kind=self.kind, xi=self.xi, u=row) for row in self.u]

    @property
    def initial(self) -> ModeState:
        return ModeState(kind=self.kind, xi=self.xi, u=self.u[0])
