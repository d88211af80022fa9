"""Result records produced by the checks and fits."""

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from bresselab.models.config import LyapunovConfig
from bresselab.models.grid import FloatArray
from bresselab.models.parameters import SpeedClass, SystemKind

Verdict = Literal["pass", "fail"]


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of certifying one identity or inequality over samples.

    ``max_violation <= tolerance`` means the statement held at every sample
    with ``fitted_constant`` as its free multiplier.
    """

    lemma_id: str
    max_violation: float
    fitted_constant: float
    n_samples: int
    tolerance: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.fitted_constant)) and self.max_violation <= self.tolerance


@dataclass(frozen=True, kw_only=True)
class PropositionReport(ResidualReport):
    """Lyapunov-level constants fitted over a set of modes."""

    kind: SystemKind
    speeds: SpeedClass
    config: LyapunovConfig
    M: float  # weight of the elastic dissipation the partial functional provides
    M_undamped: float  # the same on non-dissipating samples, where the thermal side vanishes
    M1: float  # sandwich constant of the partial functional against the energy
    M2: float  # decay constant of the full functional against rho(xi) E
    beta: float
    envelope_constant: float
    xis: FloatArray
    beta_local: FloatArray
    spectral_ok: bool

    @property
    def passed(self) -> bool:
        return super().passed and self.beta > 0 and self.spectral_ok


@dataclass(frozen=True)
class BoundRegion:
    name: str
    lo: float
    hi: float
    worst_margin: float
    violations: int


@dataclass(frozen=True)
class BoundReport:
    """Two-sided envelope bounds checked on dense grids."""

    regions: list[BoundRegion]

    @property
    def passed(self) -> bool:
        return all(r.violations == 0 for r in self.regions)

    @property
    def worst_margin(self) -> float:
        return min(r.worst_margin for r in self.regions)


@dataclass(frozen=True)
class EnvelopeFit:
    """Certified pointwise bound E(xi,t) <= C E(xi,0) exp(-beta s(xi) t)."""

    C: float
    beta: float
    speeds: SpeedClass
    kind: SystemKind
    grid: FloatArray
    max_violation: float
    local_betas: FloatArray
    excluded: tuple[float, ...] = ()


@dataclass(frozen=True)
class NormReport:
    """Sobolev norms of the vector solution at sampled times.

    ``norms_low``/``norms_high`` are the parts from |xi| <= 1 and |xi| >= 1.
    ``transient`` flags samples where the norm grew since the previous one.
    """

    times: FloatArray
    k: int
    norms: FloatArray
    norms_low: FloatArray
    norms_high: FloatArray
    l1_init: float | None
    hs_init: dict[int, float] = field(default_factory=dict)
    transient: FloatArray = field(default_factory=lambda: np.empty(0, dtype=bool))


@dataclass(frozen=True)
class RateReport:
    """Fitted decay against the predicted exponents."""

    k: int
    l: int  # noqa: E741
    speeds: SpeedClass
    kind: SystemKind
    fitted_slope: float
    stderr: float
    predicted_l1_slope: float
    predicted_reg_slope: float
    governing: Literal["l1", "regularity"]
    window: tuple[float, float]
    verdict: Verdict
    domination_constant: float
    exp_rate: float | None = None
    envelope_rate: float | None = None
    note: str = ""

    @property
    def predicted(self) -> float:
        if self.governing == "l1":
            return self.predicted_l1_slope
        return self.predicted_reg_slope
