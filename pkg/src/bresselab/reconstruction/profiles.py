"""Initial data with closed-form Fourier transforms.

Convention: f_hat(xi) = integral of f(x) exp(-i xi x) dx, so that
||f||_2^2 = (1 / 2 pi) ||f_hat||_2^2.
"""

import math
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from bresselab.errors import BadAssignment
from bresselab.models.config import ExperimentConfig
from bresselab.models.grid import FloatArray
from bresselab.models.parameters import Parameters, SystemKind, validate
from bresselab.models.state import TYPE_III_LAYOUT, ComplexArray, ModeState, layout


class ProfileKind(StrEnum):
    GAUSSIAN = "gaussian"
    BOX = "box"
    BAND = "band"
    DGAUSS = "dgauss"


@dataclass(frozen=True)
class InitialProfile:
    """One scalar profile placed in the listed state components.

    ``slots`` name components of the mode state: ``phi`` is the initial
    displacement phi_0, ``phi_t`` the initial velocity phi_1, and so on.
    """

    kind: ProfileKind
    slots: tuple[str, ...] = ("phi_t",)
    sigma: float = 1.0
    halfwidth: float = 1.0
    band: tuple[float, float] = (10.0, 20.0)
    order: int = 1

    def __post_init__(self) -> None:
        unknown = [s for s in self.slots if s not in TYPE_III_LAYOUT]
        if unknown:
            raise BadAssignment(f"unknown state components {unknown}")
        if not self.slots:
            raise BadAssignment("a profile needs at least one component")

    @classmethod
    def from_config(cls, cfg: ExperimentConfig) -> "InitialProfile":
        return cls(
            kind=ProfileKind(cfg.profile),
            slots=cfg.slots,
            sigma=cfg.sigma,
            halfwidth=cfg.halfwidth,
            band=(cfg.band_lo, cfg.band_hi),
            order=cfg.order,
        )

    def check(self, kind: SystemKind) -> None:
        """Raise BadAssignment if a slot does not exist for ``kind``."""
        names = layout(kind)
        missing = [s for s in self.slots if s not in names]
        if missing:
            raise BadAssignment(f"{kind.label} states have no components {missing}")

    def transform(self, xi: FloatArray | float) -> ComplexArray:
        xi = np.asarray(xi, dtype=float)
        match self.kind:
            case ProfileKind.GAUSSIAN:
                values = self._gaussian(xi)
            case ProfileKind.DGAUSS:
                values = (1j * xi) ** self.order * self._gaussian(xi)
            case ProfileKind.BOX:
                h = self.halfwidth
                values = 2 * h * np.sinc(h * xi / np.pi)
            case ProfileKind.BAND:
                lo, hi = self.band
                values = ((np.abs(xi) >= lo) & (np.abs(xi) <= hi)).astype(float)
        return np.asarray(values, dtype=np.complex128)

    def _gaussian(self, xi: FloatArray) -> FloatArray:
        s = self.sigma
        return s * math.sqrt(2 * math.pi) * np.exp(-0.5 * (s * xi) ** 2)

    def support_max(self) -> float:
        """Largest |xi| where the transform is nonzero (inf unless band limited)."""
        return self.band[1] if self.kind is ProfileKind.BAND else math.inf

    def derivative_l1(self, n: int) -> float | None:
        """||d^n f / dx^n||_1 in closed form, None where it is not finite or known."""
        if self.kind is ProfileKind.BOX:
            return 2 * self.halfwidth if n == 0 else None
        if self.kind is ProfileKind.BAND:
            return None
        total = n + (self.order if self.kind is ProfileKind.DGAUSS else 0)
        s = self.sigma
        match total:
            case 0:
                return s * math.sqrt(2 * math.pi)
            case 1:
                return 2.0
            case 2:
                # g'' changes sign at +-sigma, where |g'| peaks at exp(-1/2) / sigma
                return 4 * math.exp(-0.5) / s
            case _:
                return None


def initial_states(profile: InitialProfile, kind: SystemKind, xis: FloatArray) -> ComplexArray:
    """Initial mode states at every xi, shape (len(xis), dim)."""
    profile.check(kind)
    xis = np.asarray(xis, dtype=float)
    u = np.zeros((xis.size, kind.dim), dtype=np.complex128)
    values = profile.transform(xis)
    names = layout(kind)
    for name in profile.slots:
        u[:, names.index(name)] = values
    return u


def initial_mode_state(
    profile: InitialProfile, p: Parameters, kind: SystemKind, xi: float
) -> ModeState:
    """Transform of ``profile`` at ``xi`` in the assigned components, zero elsewhere."""
    validate(p, kind, allow_degenerate=True)
    return ModeState(kind=kind, xi=xi, u=initial_states(profile, kind, np.array([xi]))[0])
