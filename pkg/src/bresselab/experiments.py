"""The five experiments behind the command line.

Each runner takes a validated ExperimentConfig, writes its CSV under
``cfg.out``, prints a summary and returns whether every verdict passed.
"""

import logging
from collections.abc import Callable
from pathlib import Path

import numpy as np

from bresselab.envelopes import (
    bound_check,
    envelope_for,
    envelope_times,
    fit_envelope,
    rate_resolution,
    s1,
    s2,
)
from bresselab.functionals import (
    attach_energies,
    check_dissipation_identity,
    check_lemma_inequality,
    check_proposition,
    lemma_ids,
)
from bresselab.models.config import ExperimentConfig, default_lyapunov_config
from bresselab.models.grid import FloatArray
from bresselab.models.parameters import SpeedClass, classify_speeds
from bresselab.models.reports import RateReport, ResidualReport
from bresselab.models.state import ComplexArray, Trajectory, layout
from bresselab.output import Cell, render_summary, write_csv
from bresselab.parallel import map_modes
from bresselab.rates import RateExperiment, exponent_ratio
from bresselab.rates import run_rates as run_rate_experiment
from bresselab.reconstruction.profiles import InitialProfile, initial_states
from bresselab.spectral.generator import Coupling, build_generator
from bresselab.spectral.propagator import evolve_batch, sample_times, spectral_abscissa

logger = logging.getLogger(__name__)

# Lower end of the envelope sweep; below it envelope horizons exceed 1e12
ENVELOPE_XI_MIN = 1e-2
ENVELOPE_STATES = 4
# Relative energy growth tolerated between simulation samples
ENERGY_GROWTH_SLACK = 1e-9
SPECTRAL_SLACK = 1e-6


def _flipped(cfg: ExperimentConfig) -> Coupling | None:
    return Coupling(cfg.flip_coupling) if cfg.flip_coupling else None


def _random_states(rng: np.random.Generator, n: int, dim: int) -> ComplexArray:
    return rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))


def _path(cfg: ExperimentConfig, name: str) -> Path:
    return Path(cfg.out) / f"{name}.csv"


def _verdict(passed: bool) -> str:
    return "pass" if passed else "fail"


def _at(xi: float | None) -> str:
    return f" xi={xi:g}" if xi is not None else ""


def run_bounds(cfg: ExperimentConfig) -> bool:
    report = bound_check()
    write_csv(
        _path(cfg, "bounds"),
        ["region", "xi_lo", "xi_hi", "worst_margin", "violations"],
        [(r.name, r.lo, r.hi, r.worst_margin, r.violations) for r in report.regions],
        cfg.config_hash(),
        meta={"s1_at_1": float(s1(1.0)), "s2_at_1": float(s2(1.0))},
    )
    render_summary(
        "envelope bounds",
        [(r.name, r.worst_margin) for r in report.regions]
        + [("verdict", _verdict(report.passed))],
    )
    return report.passed


def _trajectories(
    cfg: ExperimentConfig,
    xis: FloatArray,
    u0: list[ComplexArray],
    times_for: FloatArray | Callable[[float], FloatArray],
) -> list[list[Trajectory]]:
    flipped = _flipped(cfg)
    p, kind = cfg.parameters, cfg.kind

    def mode(i: int) -> list[Trajectory]:
        xi = float(xis[i])
        times = times_for(xi) if callable(times_for) else times_for
        g = build_generator(p, kind, xi, flipped)
        return [attach_energies(tr, p) for tr in evolve_batch(g, u0[i], times)]

    return map_modes(mode, range(xis.size), cfg.threads)


def mode_path(cfg: ExperimentConfig, xi: float) -> Path:
    """Trajectory file of one frequency, ``mode_<kind>_<xi>.csv``."""
    return _path(cfg, f"mode_{cfg.kind}_{xi:g}")


def run_simulate(cfg: ExperimentConfig) -> bool:
    """Evolve the configured initial profile at every listed xi, one file per mode."""
    profile = InitialProfile.from_config(cfg)
    xis = np.asarray(cfg.xi_values, dtype=float)
    u0 = [row[None, :] for row in initial_states(profile, cfg.kind, xis)]
    times = sample_times(cfg.t_max, cfg.n_times)
    modes = _trajectories(cfg, xis, u0, times)

    header = ["t"]
    header += [f"{part}_u{i}" for i in range(cfg.kind.dim) for part in ("re", "im")]
    header.append("energy")
    growth = 0.0
    for (tr,) in modes:
        e = tr.energies
        if e[0] > 0:
            growth = max(growth, float(np.max(np.diff(e)) / e[0]))
        rows = [
            [float(t), *(x for z in u for x in (z.real, z.imag)), float(energy)]
            for t, energy, u in zip(tr.times, e, tr.u, strict=True)
        ]
        meta = {"xi": tr.xi, "components": " ".join(layout(cfg.kind))}
        write_csv(mode_path(cfg, tr.xi), header, rows, cfg.config_hash(), meta=meta)
    passed = growth <= ENERGY_GROWTH_SLACK
    render_summary(
        f"{cfg.kind.label} trajectories",
        [("modes", len(modes)), ("largest relative energy growth", growth)]
        + [("verdict", _verdict(passed))],
    )
    return passed


def run_envelope(cfg: ExperimentConfig) -> bool:
    """Fit (C, beta) over log-spaced modes and compare with the spectral rates."""
    p, kind = cfg.parameters, cfg.kind
    speeds = classify_speeds(p)
    xis = np.geomspace(max(cfg.xi_min, ENVELOPE_XI_MIN), cfg.xi_max, cfg.n_modes)
    rng = np.random.default_rng(cfg.seed)
    u0 = [_random_states(rng, ENVELOPE_STATES, kind.dim) for _ in xis]
    modes = _trajectories(cfg, xis, u0, lambda xi: envelope_times(xi, speeds))
    fit = fit_envelope([tr for mode in modes for tr in mode], speeds)

    envelope = envelope_for(speeds)
    abscissa = np.array([spectral_abscissa(mode[0].generator) for mode in modes])
    spectral = 2 * np.abs(abscissa)
    certified = fit.beta * np.asarray(envelope(xis))
    local: dict[float, float] = {}
    for xi, b in zip(fit.grid.tolist(), fit.local_betas.tolist(), strict=True):
        local[xi] = min(b, local.get(xi, np.inf))
    write_csv(
        _path(cfg, "envelope"),
        ["xi", "s", "abscissa", "fitted_beta_local", "beta_s"],
        [
            (float(xi), float(envelope(xi)), float(a), local.get(float(xi)), float(c))
            for xi, a, c in zip(xis, abscissa, certified, strict=True)
        ],
        cfg.config_hash(),
        meta={"C": fit.C, "beta": fit.beta, "max_violation": fit.max_violation},
    )
    allowance = np.array([rate_resolution(float(xi), speeds) for xi in xis])
    spectral_ok = bool(np.all(certified <= spectral * (1 + SPECTRAL_SLACK + allowance)))
    passed = fit.beta > 0 and fit.max_violation <= 1e-9 and spectral_ok
    render_summary(
        f"{kind.label} {speeds} envelope",
        [
            ("modes", len(fit.grid)),
            ("C", fit.C),
            ("beta", fit.beta),
            ("max violation", fit.max_violation),
            ("beta s <= spectral rate", spectral_ok),
            ("verdict", _verdict(passed)),
        ],
    )
    return passed


def run_verify(cfg: ExperimentConfig) -> bool:
    """Energy balance, every inequality of the ladder and the Lyapunov constants."""
    p, kind = cfg.parameters, cfg.kind
    xis = np.asarray(cfg.xi_values, dtype=float)
    rng = np.random.default_rng(cfg.seed)
    u0 = [_random_states(rng, cfg.n_states, kind.dim) for _ in xis]
    modes = _trajectories(cfg, xis, u0, sample_times(cfg.t_max, cfg.n_times))
    trajectories = [tr for mode in modes for tr in mode]

    rows: list[tuple[str, float | None, ResidualReport]] = []
    for xi, mode in zip(xis, modes, strict=True):
        reports = [check_dissipation_identity(tr, p) for tr in mode]
        worst = max(reports, key=lambda r: r.max_violation)
        rows.append(("dissipation", float(xi), worst))
    lyap = default_lyapunov_config(p, kind)
    for lemma in lemma_ids(kind):
        rows.append((str(lemma), None, check_lemma_inequality(lemma, trajectories, p, lyap)))
    proposition = check_proposition(trajectories, p, lyap, seed=cfg.seed)
    rows.append(("proposition", None, proposition))

    write_csv(
        _path(cfg, "verify"),
        ["check", "xi", "max_violation", "fitted_constant", "n_samples", "verdict"],
        [
            (name, xi, r.max_violation, r.fitted_constant, r.n_samples, _verdict(r.passed))
            for name, xi, r in rows
        ],
        cfg.config_hash(),
        meta={
            "beta": proposition.beta,
            "M": proposition.M,
            "M1": proposition.M1,
            "M2": proposition.M2,
            "envelope_constant": proposition.envelope_constant,
        },
    )
    passed = all(r.passed for _, _, r in rows)
    for name, xi, r in rows:
        if not r.passed:
            logger.warning("%s%s failed: violation %.3e", name, _at(xi), r.max_violation)
    render_summary(
        f"{kind.label} {proposition.speeds} verification",
        [(f"{name}{_at(xi)}", r.max_violation) for name, xi, r in rows]
        + [("beta", proposition.beta), ("verdict", _verdict(passed))],
    )
    return passed


def _speed_ratio(experiment: RateExperiment, rate: RateReport) -> tuple[RateReport, float]:
    """Companion run in the other speed class and the equal/distinct rate ratio."""
    companion = run_rate_experiment(experiment.speed_companion()).rate
    if rate.speeds is SpeedClass.EQUAL:
        return companion, exponent_ratio(rate, companion)
    return companion, exponent_ratio(companion, rate)


def run_rates(cfg: ExperimentConfig) -> bool:
    experiment = RateExperiment.from_config(cfg)
    result = run_rate_experiment(experiment)
    rate, norms = result.rate, result.norms
    bound = result.bound(norms.times)
    passed = rate.verdict == "pass"
    ratio_rows: list[tuple[str, Cell]] = []
    meta: dict[str, Cell] = {}
    if experiment.band_limited:
        companion, speed_ratio = _speed_ratio(experiment, rate)
        passed = passed and companion.verdict == "pass"
        xi_star = experiment.profile.band[1]
        meta = {
            "companion_exp_rate": companion.exp_rate,
            "companion_envelope_rate": companion.envelope_rate,
            "speed_ratio": speed_ratio,
            "xi_star": xi_star,
        }
        ratio_rows = [
            (f"{companion.speeds} exponential rate", companion.exp_rate),
            (f"{companion.speeds} verdict", companion.verdict),
            ("equal/distinct rate ratio", speed_ratio),
            (f"xi^2 at xi={xi_star:g}", xi_star**2),
        ]
    write_csv(
        _path(cfg, "rates"),
        ["t", "k", "norm", "norm_low", "norm_high", "envelope_bound", "transient"],
        [
            (float(t), norms.k, float(n), float(lo), float(hi), float(b), bool(tr))
            for t, n, lo, hi, b, tr in zip(
                norms.times,
                norms.norms,
                norms.norms_low,
                norms.norms_high,
                bound,
                norms.transient,
                strict=True,
            )
        ],
        cfg.config_hash(),
        meta={
            "fitted_slope": rate.fitted_slope,
            "stderr": rate.stderr,
            "predicted_l1_slope": rate.predicted_l1_slope,
            "predicted_reg_slope": rate.predicted_reg_slope,
            "governing": rate.governing,
            "window_min": rate.window[0],
            "window_max": rate.window[1],
            "C1": result.bound.C1,
            "C2": result.bound.C2,
            "exp_rate": rate.exp_rate,
            "envelope_rate": rate.envelope_rate,
            **meta,
            "verdict": _verdict(passed),
        },
    )
    render_summary(
        f"{rate.kind.label} {rate.speeds} rates (k={rate.k}, l={rate.l})",
        [
            ("window", f"[{rate.window[0]:g}, {rate.window[1]:g}]"),
            ("fitted slope", rate.fitted_slope),
            ("stderr", rate.stderr),
            ("predicted", rate.predicted),
            ("governing term", rate.governing),
            ("exponential rate", rate.exp_rate),
            ("envelope rate", rate.envelope_rate),
            *ratio_rows,
            ("verdict", _verdict(passed)),
        ],
    )
    return passed


RUNNERS = {
    "bounds": run_bounds,
    "simulate": run_simulate,
    "envelope": run_envelope,
    "verify": run_verify,
    "rates": run_rates,
}


def run(cfg: ExperimentConfig) -> bool:
    """Dispatch ``cfg.experiment``; True iff every verdict passed."""
    logger.info("%s experiment, config %s", cfg.experiment, cfg.config_hash())
    return RUNNERS[cfg.experiment](cfg)
