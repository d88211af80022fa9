"""Decay envelopes s1/s2 and pointwise envelope fitting.

Mode energies obey E(xi, t) <= C E(xi, 0) exp(-beta s(xi) t), with s = s1 when
the wave speeds coincide and s = s2 otherwise. Both envelopes vanish like xi^4
at the origin; at high frequency s1 ~ xi^-4 and s2 ~ xi^-6.
"""

import logging
import math
from collections.abc import Callable, Sequence

import numpy as np

from bresselab.errors import NoDecay
from bresselab.models.grid import FloatArray
from bresselab.models.parameters import SpeedClass
from bresselab.models.reports import BoundRegion, BoundReport, EnvelopeFit
from bresselab.models.state import Trajectory

logger = logging.getLogger(__name__)

Envelope = Callable[[FloatArray | float], FloatArray | float]

# Largest envelope constant accepted by the fit
C_MAX = 1e6
# Relative resolution of the rate search
BETA_RESOLUTION = 1e-3
# Samples this far below the initial energy sit at the underflow floor
RATIO_FLOOR = 1e-250
# Smallest initial energy share of the slowest mode the resolution covers
PROJECTION_FLOOR = 1e-3


def s1(xi: FloatArray | float) -> FloatArray | float:
    x2 = np.square(xi)
    return x2 * x2 / (1 + x2 + x2**2 + x2**3 + x2**4)


def s2(xi: FloatArray | float) -> FloatArray | float:
    x2 = np.square(xi)
    return x2 * x2 / ((1 + x2) * (1 + x2 + x2**2) ** 2)


def envelope_for(speeds: SpeedClass) -> Envelope:
    return s1 if speeds is SpeedClass.EQUAL else s2


def envelope_horizon(xi: float, speeds: SpeedClass) -> float:
    """Last sample time of an envelope trajectory at xi."""
    return 1e6 / (float(envelope_for(speeds)(xi)) + 1e-6)


def envelope_times(xi: float, speeds: SpeedClass, n: int = 64) -> FloatArray:
    """0 then log-spaced times long enough to see many e-foldings of the mode."""
    return np.concatenate([[0.0], np.geomspace(1e-2, envelope_horizon(xi, speeds), n - 1)])


def rate_resolution(xi: float, speeds: SpeedClass, n: int = 64) -> float:
    """Relative rate excess a fit capped at C_MAX cannot resolve at xi.

    Samples end once the energy ratio falls to RATIO_FLOOR, so log C_MAX and
    the log of the initial projection onto the slowest eigenmode spread over
    about -log(RATIO_FLOOR) e-foldings, shortened by one sample step.
    """
    step = (envelope_horizon(xi, speeds) / 1e-2) ** (1 / (n - 2))
    return step * math.log(C_MAX / PROJECTION_FLOOR) / -math.log(RATIO_FLOOR)


def _region(
    name: str,
    xi: FloatArray,
    values: FloatArray,
    lower: FloatArray,
    upper: FloatArray,
) -> BoundRegion:
    positive = lower > 0
    margins = np.concatenate(
        [values[positive] / lower[positive] - 1.0, 1.0 - values[positive] / upper[positive]]
    )
    # s == lower == upper == 0 at the origin counts as satisfied
    violations = int(np.sum(margins < -1e-12))
    return BoundRegion(
        name=name,
        lo=float(xi[0]),
        hi=float(xi[-1]),
        worst_margin=float(np.min(margins)),
        violations=violations,
    )


def bound_check(n: int = 10_000, xi_high: float = 1e3) -> BoundReport:
    """Two-sided power-law bounds of s1 and s2 below and above |xi| = 1."""
    low = np.linspace(0.0, 1.0, n)
    high = np.geomspace(1.0, xi_high, n)
    regions = [
        _region("s1_low", low, s1(low), low**4 / 5, low**4),
        _region("s1_high", high, s1(high), high**-4 / 5, high**-4),
        _region("s2_low", low, s2(low), low**4 / 18, low**4),
        _region("s2_high", high, s2(high), high**-6 / 18, high**-6),
    ]
    for region in regions:
        logger.info(
            "%s on [%g, %g]: worst margin %.3e, %d violations",
            region.name,
            region.lo,
            region.hi,
            region.worst_margin,
            region.violations,
        )
    return BoundReport(regions=regions)


def _log_excess(log_ratio: FloatArray, envelope_time: FloatArray, beta: float) -> float:
    """log C(beta) = max over samples of log(E/E0) + beta s t."""
    return float(np.max(log_ratio + beta * envelope_time))


def _largest_rate(log_ratio: FloatArray, envelope_time: FloatArray) -> float:
    """Largest beta with C(beta) <= C_MAX, to BETA_RESOLUTION relative."""
    limit = math.log(C_MAX)

    def feasible(beta: float) -> bool:
        return _log_excess(log_ratio, envelope_time, beta) <= limit

    hi = 1.0
    for _ in range(200):
        if not feasible(hi):
            break
        hi *= 2.0
    else:
        return hi
    lo = hi / 2.0
    for _ in range(400):
        if feasible(lo):
            break
        lo /= 2.0
    else:
        raise NoDecay("no positive rate keeps the envelope constant below the cap")
    while hi / lo > 1.0 + BETA_RESOLUTION:
        mid = math.sqrt(lo * hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def fit_envelope(trajectories: Sequence[Trajectory], speeds: SpeedClass) -> EnvelopeFit:
    """Extremal (C, beta) with E(xi,t) <= C E(xi,0) exp(-beta s(xi) t) on all samples.

    Trajectories need their energies attached. Modes with zero initial energy
    are excluded and listed in the result.
    """
    if not trajectories:
        raise ValueError("no trajectories to fit")
    envelope = envelope_for(speeds)
    kind = trajectories[0].kind
    log_ratios, envelope_times_, xis, excluded = [], [], [], []
    for tr in trajectories:
        if tr.energies.size != len(tr):
            raise ValueError(f"trajectory at xi={tr.xi} has no energies attached")
        e0 = tr.energies[0]
        if e0 <= 0:
            excluded.append(tr.xi)
            continue
        ratio = tr.energies / e0
        if ratio[-1] >= 1.0 - 1e-9:
            raise NoDecay(f"energy at xi={tr.xi} did not decrease over the sampled window")
        keep = ratio > RATIO_FLOOR
        log_ratios.append(np.log(ratio[keep]))
        envelope_times_.append(float(envelope(tr.xi)) * tr.times[keep])
        xis.append(tr.xi)
    if excluded:
        logger.warning("excluded %d modes with zero initial energy", len(excluded))
    if not xis:
        raise NoDecay("every mode has zero initial energy")

    local_betas = np.array(
        [_largest_rate(r, st) for r, st in zip(log_ratios, envelope_times_, strict=True)]
    )
    log_ratio = np.concatenate(log_ratios)
    envelope_time = np.concatenate(envelope_times_)
    beta = _largest_rate(log_ratio, envelope_time)
    c = max(1.0, math.exp(_log_excess(log_ratio, envelope_time, beta)))
    violation = float(np.max(np.exp(log_ratio) - c * np.exp(-beta * envelope_time)))
    logger.info("envelope fit over %d modes: beta=%.4g C=%.4g", len(xis), beta, c)
    return EnvelopeFit(
        C=c,
        beta=beta,
        speeds=speeds,
        kind=kind,
        grid=np.array(xis),
        max_violation=violation,
        local_betas=local_betas,
        excluded=tuple(excluded),
    )
