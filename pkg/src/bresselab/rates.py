"""Decay exponents fitted from norm series and the rates they should obey.

For L1 and H^s initial data the solution satisfies

    ||d^k V(t)||_2 <= C1 (1+t)^(-1/8 - k/4) ||V0||_1 + C2 (1+t)^(-l/4) ||d^(k+l) V0||_2

with -l/6 in place of -l/4 when the wave speeds differ. The first term is
carried by low frequencies, the second by high ones; band-limited data away
from the origin decays exponentially at the envelope rate of its band.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, replace

import numpy as np
import scipy.stats

from bresselab.envelopes import envelope_for, envelope_times, fit_envelope
from bresselab.errors import InsufficientSamples, NonPositiveNorm
from bresselab.functionals.energy import attach_energies
from bresselab.models.config import DEFAULT_WINDOW, ExperimentConfig
from bresselab.models.grid import FloatArray, FrequencyGrid
from bresselab.models.parameters import Parameters, SpeedClass, SystemKind, classify_speeds
from bresselab.models.reports import EnvelopeFit, NormReport, RateReport
from bresselab.models.state import Trajectory
from bresselab.parallel import map_modes
from bresselab.reconstruction.norms import norm_report, profile_grid
from bresselab.reconstruction.profiles import InitialProfile, ProfileKind, initial_states
from bresselab.spectral.generator import build_generator
from bresselab.spectral.propagator import evolve_batch, sample_times

logger = logging.getLogger(__name__)

MIN_WINDOW_SAMPLES = 8
# Band fit window in units of the inverse slowest in-band energy rate
BAND_WINDOW = (50.0, 500.0)
# Slope excess over the prediction still accepted
SLOPE_TOLERANCE = 0.03
# Growth of norm / predicted envelope accepted inside the window
DOMINATION_TOLERANCE = 0.05
# Relative mismatch of the band decay rate and the envelope rate still accepted
EXP_RATE_TOLERANCE = 0.05
# Modes sampled across a band to fit its envelope rate
BAND_MODES = 16


def theorem_rate_prediction(
    k: int,
    l: int,  # noqa: E741
    speeds: SpeedClass,
) -> tuple[float, float]:
    """(L1 slope, regularity slope) of the norm against log(1+t)."""
    if k < 0 or l < 0:
        raise ValueError("derivative orders must be nonnegative")
    reg = -l / 4 if speeds is SpeedClass.EQUAL else -l / 6
    return -0.125 - k / 4, reg


def _window(
    times: FloatArray, norms: FloatArray, window: tuple[float, float]
) -> tuple[FloatArray, FloatArray]:
    times = np.asarray(times, dtype=float)
    norms = np.asarray(norms, dtype=float)
    lo, hi = window
    inside = (times >= lo) & (times <= hi)
    n = int(inside.sum())
    if n < MIN_WINDOW_SAMPLES:
        raise InsufficientSamples(
            f"{n} samples in [{lo:g}, {hi:g}], at least {MIN_WINDOW_SAMPLES} needed"
        )
    t, y = times[inside], norms[inside]
    if np.any(y <= 0) or not np.all(np.isfinite(y)):
        raise NonPositiveNorm(f"norms in [{lo:g}, {hi:g}] must be positive and finite")
    return t, y


def fit_log_slope(
    times: FloatArray, norms: FloatArray, window: tuple[float, float]
) -> tuple[float, float]:
    """Least-squares slope of log(norm) against log(1+t) and its standard error."""
    t, y = _window(times, norms, window)
    fit = scipy.stats.linregress(np.log1p(t), np.log(y))
    return float(fit.slope), float(fit.stderr)


def fit_exp_rate(
    times: FloatArray, norms: FloatArray, window: tuple[float, float]
) -> tuple[float, float]:
    """Energy-level exponential rate: -d log(norm^2)/dt over the window."""
    t, y = _window(times, norms, window)
    fit = scipy.stats.linregress(t, 2 * np.log(y))
    return -float(fit.slope), float(fit.stderr)


@dataclass(frozen=True)
class TwoTermBound:
    """C1 (1+t)^a L1 + C2 (1+t)^b Hs fitted on the low/high-frequency parts."""

    C1: float
    C2: float
    l1_slope: float
    reg_slope: float
    l1_norm: float
    hs_norm: float

    def low_term(self, times: FloatArray) -> FloatArray:
        return self.C1 * (1 + np.asarray(times)) ** self.l1_slope * self.l1_norm

    def high_term(self, times: FloatArray) -> FloatArray:
        return self.C2 * (1 + np.asarray(times)) ** self.reg_slope * self.hs_norm

    def __call__(self, times: FloatArray) -> FloatArray:
        return self.low_term(times) + self.high_term(times)


def _smallest_multiplier(values: FloatArray, envelope: FloatArray) -> float:
    positive = envelope > 0
    if not np.any(positive) or not np.any(values[positive] > 0):
        return 0.0
    return float(np.max(values[positive] / envelope[positive]))


def fit_two_term_bound(
    report: NormReport,
    l: int,  # noqa: E741
    speeds: SpeedClass,
) -> TwoTermBound:
    """Smallest C1, C2 making each term dominate its frequency part at every sample.

    ||V0||_1 or ||d^(k+l) V0||_2 count as 1 when unavailable.
    """
    l1_slope, reg_slope = theorem_rate_prediction(report.k, l, speeds)
    l1_norm = report.l1_init if report.l1_init else 1.0
    hs = report.hs_init.get(l) or 1.0
    t = 1 + report.times
    return TwoTermBound(
        C1=_smallest_multiplier(report.norms_low, t**l1_slope * l1_norm),
        C2=_smallest_multiplier(report.norms_high, t**reg_slope * hs),
        l1_slope=l1_slope,
        reg_slope=reg_slope,
        l1_norm=l1_norm,
        hs_norm=hs,
    )


def domination(
    times: FloatArray, norms: FloatArray, slope: float, window: tuple[float, float]
) -> tuple[float, bool]:
    """Constant C fitted before the window and whether C (1+t)^slope bounds the window.

    A growth of DOMINATION_TOLERANCE over C inside the window is accepted.
    """
    times = np.asarray(times, dtype=float)
    ratio = np.asarray(norms) / (1 + times) ** slope
    before = times <= window[0]
    inside = (times >= window[0]) & (times <= window[1])
    c = float(np.max(ratio[before])) if np.any(before) else float(ratio[inside][0])
    return c, bool(np.all(ratio[inside] <= c * (1 + DOMINATION_TOLERANCE)))


def window_times(window: tuple[float, float], n: int, t_min: float = 1e-1) -> FloatArray:
    """0, a geometric lead-in up to the window, then ``n`` samples across it."""
    lo, hi = window
    lead = sample_times(lo, max(n // 2, 2), min(t_min, lo / 10))
    return np.concatenate([lead[:-1], np.geomspace(lo, hi, n)])


def band_window(rate: float) -> tuple[float, float]:
    """Window where the slowest in-band mode dominates and norms stay representable."""
    if rate <= 0:
        raise ValueError("band windows need a positive decay rate")
    return BAND_WINDOW[0] / rate, BAND_WINDOW[1] / rate


@dataclass(frozen=True)
class RateExperiment:
    p: Parameters
    kind: SystemKind
    profile: InitialProfile
    k: int
    grid: FrequencyGrid
    window: tuple[float, float] | None = None
    l: int = 0  # noqa: E741
    n_times: int = 64
    t_min: float = 1e-1
    threads: int = 1

    @classmethod
    def from_config(cls, cfg: ExperimentConfig) -> "RateExperiment":
        profile = InitialProfile.from_config(cfg)
        configured = cfg.window_min is not None or cfg.window_max is not None
        return cls(
            p=cfg.parameters,
            kind=cfg.kind,
            profile=profile,
            k=cfg.deriv_order,
            grid=profile_grid(profile, cfg),
            window=cfg.window if configured else None,
            l=cfg.reg_order,
            n_times=max(cfg.n_times, 2 * MIN_WINDOW_SAMPLES),
            threads=cfg.threads,
        )

    @property
    def band_limited(self) -> bool:
        return self.profile.kind is ProfileKind.BAND

    def window_for(self, reference_rate: float | None = None) -> tuple[float, float]:
        """The configured window, else one placed on the decay of the data."""
        if self.window is not None:
            return self.window
        if self.band_limited and reference_rate is not None:
            return band_window(reference_rate)
        return DEFAULT_WINDOW

    def speed_companion(self) -> "RateExperiment":
        """Same data and system with the other wave-speed class.

        Equal speeds get b doubled; distinct speeds get k0 = k and
        b = k rho2 / rho1.
        """
        p = self.p
        if classify_speeds(p) is SpeedClass.EQUAL:
            other = p.scaled(b=2.0)
        else:
            other = p.model_copy(update={"k0": p.k, "b": p.k * p.rho2 / p.rho1})
        return replace(self, p=other, window=None)


@dataclass(frozen=True)
class RateRun:
    norms: NormReport
    rate: RateReport
    bound: TwoTermBound


def band_envelope(
    experiment: RateExperiment, xis: Sequence[float] | None = None
) -> EnvelopeFit:
    """Envelope (C, beta) fitted on modes spread across the band of the data."""
    lo, hi = experiment.profile.band
    xis = np.linspace(lo, hi, BAND_MODES) if xis is None else np.asarray(xis, dtype=float)
    speeds = classify_speeds(experiment.p)
    u0 = initial_states(experiment.profile, experiment.kind, xis)

    def mode(i: int) -> Trajectory:
        g = build_generator(experiment.p, experiment.kind, float(xis[i]))
        times = envelope_times(float(xis[i]), speeds)
        (tr,) = evolve_batch(g, u0[i][None, :], times)
        return attach_energies(tr, experiment.p)

    trajectories = map_modes(mode, range(xis.size), experiment.threads)
    return fit_envelope(trajectories, speeds)


def slowest_mode_rate(envelope: EnvelopeFit, xi_star: float) -> float:
    """Local envelope rate beta s of the fitted mode nearest ``xi_star``."""
    i = int(np.argmin(np.abs(envelope.grid - xi_star)))
    xi = float(envelope.grid[i])
    return float(envelope.local_betas[i]) * float(envelope_for(envelope.speeds)(xi))


def run_rates(experiment: RateExperiment, envelope: EnvelopeFit | None = None) -> RateRun:
    """Norm series, fitted slopes and the verdict for one experiment.

    Band-limited data is judged by its exponential rate against the local
    envelope rate at the upper band edge, where the envelope is slowest; the
    two must agree within EXP_RATE_TOLERANCE. Integrable data is judged by
    domination of the governing power law and a one-sided slope check.
    """
    p, kind = experiment.p, experiment.kind
    speeds = classify_speeds(p)
    l1_slope, reg_slope = theorem_rate_prediction(experiment.k, experiment.l, speeds)

    envelope_rate = None
    xi_star = experiment.profile.band[1]
    if experiment.band_limited:
        if envelope is None:
            envelope = band_envelope(experiment)
        envelope_rate = slowest_mode_rate(envelope, xi_star)
    window = experiment.window_for(envelope_rate)

    norms = norm_report(
        p,
        kind,
        experiment.profile,
        experiment.k,
        window_times(window, experiment.n_times, experiment.t_min),
        experiment.grid,
        l_orders=(experiment.l,),
        threads=experiment.threads,
    )
    bound = fit_two_term_bound(norms, experiment.l, speeds)
    slope, stderr = fit_log_slope(norms.times, norms.norms, window)

    exp_rate = None
    if experiment.band_limited or norms.l1_init is None:
        governing = "regularity"
    else:
        t_end = np.array([window[1]])
        low, high = bound.low_term(t_end)[0], bound.high_term(t_end)[0]
        governing = "l1" if low >= high else "regularity"
    predicted = l1_slope if governing == "l1" else reg_slope
    constant, dominated = domination(norms.times, norms.norms, predicted, window)

    if envelope is not None and envelope_rate is not None:
        exp_rate, _ = fit_exp_rate(norms.times, norms.norms, window)
        ratio = exp_rate / envelope_rate
        passed = abs(ratio - 1) <= EXP_RATE_TOLERANCE
        band_rate = envelope.beta * float(envelope_for(speeds)(xi_star))
        note = (
            f"exponential rate {exp_rate:.4g} vs envelope rate {envelope_rate:.4g} "
            f"at xi={xi_star:g} (ratio {ratio:.4f}); band-wide beta gives {band_rate:.4g}"
        )
    else:
        passed = dominated and slope <= predicted + SLOPE_TOLERANCE
        note = f"slope {slope:.4f} vs predicted {predicted:.4f}"

    rate = RateReport(
        k=experiment.k,
        l=experiment.l,
        speeds=speeds,
        kind=kind,
        fitted_slope=slope,
        stderr=stderr,
        predicted_l1_slope=l1_slope,
        predicted_reg_slope=reg_slope,
        governing=governing,
        window=window,
        verdict="pass" if passed else "fail",
        domination_constant=constant,
        exp_rate=exp_rate,
        envelope_rate=envelope_rate,
        note=note,
    )
    log = logger.info if passed else logger.warning
    log("%s %s k=%d: %s (%s)", kind.label, speeds, experiment.k, rate.verdict, note)
    return RateRun(norms=norms, rate=rate, bound=bound)


def rate_report(experiment: RateExperiment, envelope: EnvelopeFit | None = None) -> RateReport:
    return run_rates(experiment, envelope).rate


def exponent_ratio(equal: RateReport, distinct: RateReport) -> float:
    """Equal-speed over distinct-speed exponential rate of the same band data."""
    if equal.exp_rate is None or distinct.exp_rate is None:
        raise ValueError("both reports need an exponential rate")
    if distinct.exp_rate <= 0:
        return math.inf
    return equal.exp_rate / distinct.exp_rate
