"""Physical coefficients, system kinds and wave-speed classification."""

import math
from enum import StrEnum

from pydantic import BaseModel

from bresselab.errors import NonPositiveCoefficient

# Relative tolerance of the equal-wave-speed test
CLASSIFICATION_TOLERANCE = 1e-12

# Coefficients every system needs, in declaration order
COMMON_COEFFICIENTS = ("rho1", "rho2", "b", "k", "k0", "k1", "k2", "l", "gamma", "m1", "m2")
TYPE_III_COEFFICIENTS = ("alpha1", "alpha2")
PARAMETER_NAMES = COMMON_COEFFICIENTS + TYPE_III_COEFFICIENTS


class SystemKind(StrEnum):
    """Heat conduction law of the thermoelastic system."""

    TYPE_I = "type1"
    TYPE_III = "type3"

    @property
    def dim(self) -> int:
        """Length of the Fourier-mode state vector."""
        return 8 if self is SystemKind.TYPE_I else 10

    @property
    def label(self) -> str:
        return "Type I" if self is SystemKind.TYPE_I else "Type III"


class SpeedClass(StrEnum):
    """Whether the wave speeds of propagation coincide."""

    EQUAL = "equal"
    DISTINCT = "distinct"


class Parameters(BaseModel):
    """Coefficients of the thermoelastic Bresse system.

    Defaults are the unit parameter set. ``alpha1``/``alpha2`` only enter Type III.
    """

    rho1: float = 1.0
    rho2: float = 1.0
    b: float = 1.0
    k: float = 1.0
    k0: float = 1.0
    k1: float = 1.0
    k2: float = 1.0
    l: float = 1.0  # noqa: E741
    gamma: float = 1.0
    m1: float = 1.0
    m2: float = 1.0
    alpha1: float = 1.0
    alpha2: float = 1.0

    model_config = {"frozen": True}

    def required_names(self, kind: SystemKind) -> tuple[str, ...]:
        """Coefficients read by computations for ``kind``."""
        if kind is SystemKind.TYPE_III:
            return COMMON_COEFFICIENTS + TYPE_III_COEFFICIENTS
        return COMMON_COEFFICIENTS

    def scaled(self, **factors: float) -> "Parameters":
        """Copy with the named coefficients multiplied by the given factors."""
        updates = {name: getattr(self, name) * f for name, f in factors.items()}
        return self.model_copy(update=updates)


def validate(p: Parameters, kind: SystemKind, allow_degenerate: bool = False) -> None:
    """Check every coefficient ``kind`` needs is strictly positive and finite.

    ``allow_degenerate`` admits ``gamma == 0`` (the undamped diagnostic system).
    Raises NonPositiveCoefficient naming the first offending field.
    """
    for name in p.required_names(kind):
        value = getattr(p, name)
        if not math.isfinite(value):
            raise NonPositiveCoefficient(name, value)
        if name == "gamma" and allow_degenerate and value == 0.0:
            continue
        if value <= 0.0:
            raise NonPositiveCoefficient(name, value)


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(abs(a), abs(b))


def classify_speeds(p: Parameters, tol: float = CLASSIFICATION_TOLERANCE) -> SpeedClass:
    """Equal iff rho1/rho2 = k/b and k = k0, up to a relative tolerance."""
    if _close(p.rho1 / p.rho2, p.k / p.b, tol) and _close(p.k, p.k0, tol):
        return SpeedClass.EQUAL
    return SpeedClass.DISTINCT
