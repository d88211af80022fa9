"""Lyapunov weights and experiment configuration."""

import hashlib
from typing import Literal

from pydantic import BaseModel, Field, model_validator

from bresselab.errors import ConfigError
from bresselab.models.parameters import Parameters, SpeedClass, SystemKind
from bresselab.parallel import default_threads

ExperimentType = Literal["bounds", "simulate", "envelope", "verify", "rates"]
ProfileName = Literal["gaussian", "box", "band", "dgauss"]

# Rate fitting window used when none is configured
DEFAULT_WINDOW = (1e3, 1e6)


class LyapunovConfig(BaseModel):
    """Weights combining the functional ladder into a Lyapunov functional.

    ``N``/``Nprime`` multiply the energy in the equal/distinct-speed functional;
    they and ``lambda1``/``lambda2`` are outputs of constant fitting.
    """

    eps1: float = Field(gt=0)
    eps2: float = Field(gt=0)
    eps3: float = Field(gt=0)
    eps4: float = Field(gt=0)
    lambda1: float = Field(gt=0)
    lambda2: float = Field(gt=0)
    delta: float = Field(gt=0)
    N: float = Field(default=1.0, gt=0)
    Nprime: float = Field(default=1.0, gt=0)

    model_config = {"frozen": True}

    def check(self, p: Parameters, kind: SystemKind, speeds: SpeedClass) -> None:
        """Raise ConfigError unless the weights satisfy the ladder's hypotheses."""
        if self.delta > min(p.l**2, 1.0) / 2:
            raise ConfigError(f"delta={self.delta} exceeds min(l^2, 1)/2")
        eps1_cap = p.rho2 * p.l**2 / (2 * p.rho1)
        if kind is SystemKind.TYPE_I and speeds is SpeedClass.EQUAL and self.eps1 >= eps1_cap:
            raise ConfigError(f"eps1={self.eps1} must stay below rho2 l^2/(2 rho1)={eps1_cap}")

    def with_updates(self, **changes: float) -> "LyapunovConfig":
        return self.model_copy(update=changes)


def shear_coercivity(p: Parameters) -> float:
    """The combination rho2 l^2/rho1 + 1 bounding the psi_t weight of K."""
    return p.rho2 * p.l**2 / p.rho1 + 1.0


def default_lyapunov_config(p: Parameters, kind: SystemKind) -> LyapunovConfig:
    """Weights at half their admissible ceilings; lambdas and N start at 1."""
    delta = min(p.l**2, 1.0) / 2
    s1c = shear_coercivity(p)
    eps1 = p.rho2 * p.l**2 / (4 * p.rho1)
    eps2 = p.m2 / (4 * s1c)
    shear_room = (2 * p.b * p.l / p.k) * (p.m2 / 2 - s1c * eps2)
    if kind is SystemKind.TYPE_I:
        ceiling = min(2 * delta / (3 * p.l), eps2 / (8 * p.l), shear_room)
    else:
        ceiling = min(delta / (2 * p.l), eps2 / (6 * p.l), shear_room)
    lambda2 = 1.0
    return LyapunovConfig(
        eps1=eps1,
        eps2=eps2,
        eps3=ceiling / 2,
        eps4=p.rho1 * p.l / (4 * lambda2),
        lambda1=1.0,
        lambda2=lambda2,
        delta=delta,
    )


class ExperimentConfig(BaseModel):
    """Everything that determines a run; hashed into every output header."""

    experiment: ExperimentType = "bounds"
    kind: SystemKind = SystemKind.TYPE_I
    parameters: Parameters = Field(default_factory=Parameters)

    # Initial profile
    profile: ProfileName = "gaussian"
    sigma: float = Field(default=1.0, gt=0)
    halfwidth: float = Field(default=1.0, gt=0)
    band_lo: float = Field(default=10.0, ge=0)
    band_hi: float = Field(default=20.0, gt=0)
    order: int = Field(default=1, ge=0)
    slots: tuple[str, ...] = ("phi_t",)

    # Frequency grid
    xi_min: float = Field(default=1e-3, gt=0)
    xi_max: float = Field(default=1e2, gt=0)
    n_geometric: int = Field(default=2048, ge=8)
    n_linear: int = Field(default=256, ge=2)
    n_modes: int = Field(default=512, ge=1)
    xi_values: tuple[float, ...] = (0.1, 1.0, 10.0)

    # Time sampling
    t_max: float = Field(default=50.0, gt=0)
    n_times: int = Field(default=32, ge=1)
    # None places the window: DEFAULT_WINDOW, or on the decay of band data
    window_min: float | None = Field(default=None, gt=0)
    window_max: float | None = Field(default=None, gt=0)

    # Rates
    deriv_order: int = Field(default=0, ge=0)
    reg_order: int = Field(default=4, ge=0)

    # Sampling and diagnostics
    n_states: int = Field(default=64, ge=1)
    seed: int = Field(default=42, ge=0)
    allow_degenerate: bool = False
    flip_coupling: str | None = None

    # Execution (not part of the hash)
    out: str = "out"
    threads: int = Field(default_factory=default_threads, ge=1)

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _ordered_ranges(self) -> "ExperimentConfig":
        if self.band_lo >= self.band_hi:
            raise ValueError(f"band_lo={self.band_lo:g} must be below band_hi={self.band_hi:g}")
        if self.xi_min >= self.xi_max:
            raise ValueError(f"xi_min={self.xi_min:g} must be below xi_max={self.xi_max:g}")
        if self.window_min is not None or self.window_max is not None:
            lo, hi = self.window
            if lo >= hi:
                raise ValueError(f"window_min={lo:g} must be below window_max={hi:g}")
        return self

    @property
    def window(self) -> tuple[float, float]:
        """Configured fit window, unset ends taken from DEFAULT_WINDOW."""
        lo = self.window_min if self.window_min is not None else DEFAULT_WINDOW[0]
        hi = self.window_max if self.window_max is not None else DEFAULT_WINDOW[1]
        return lo, hi

    def config_hash(self) -> str:
        """Short hex digest of every field that affects results."""
        canonical = self.model_dump_json(exclude={"out", "threads"})
        return hashlib.sha256(canonical.encode()).hexdigest()[:16]
