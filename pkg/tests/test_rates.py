"""Tests for decay-rate fitting."""

import math
from dataclasses import replace

import numpy as np
import pytest

from bresselab.errors import InsufficientSamples, NonPositiveNorm
from bresselab.models.grid import band_grid, default_grid
from bresselab.models.parameters import Parameters, SpeedClass, SystemKind, classify_speeds
from bresselab.models.reports import NormReport, RateReport
from bresselab.rates import (
    EXP_RATE_TOLERANCE,
    SLOPE_TOLERANCE,
    RateExperiment,
    band_envelope,
    band_window,
    domination,
    exponent_ratio,
    fit_exp_rate,
    fit_log_slope,
    fit_two_term_bound,
    run_rates,
    slowest_mode_rate,
    theorem_rate_prediction,
    window_times,
)
from bresselab.reconstruction import InitialProfile, ProfileKind

WINDOW = (1e3, 1e6)
TIMES = np.concatenate([[0.0], np.geomspace(1e-1, 1e6, 48)])


def test_predictions() -> None:
    assert theorem_rate_prediction(0, 0, SpeedClass.EQUAL) == (-0.125, 0.0)
    assert theorem_rate_prediction(1, 0, SpeedClass.EQUAL)[0] == -0.375
    assert theorem_rate_prediction(0, 4, SpeedClass.EQUAL)[1] == -1.0
    assert theorem_rate_prediction(0, 3, SpeedClass.DISTINCT)[1] == -0.5
    with pytest.raises(ValueError):
        theorem_rate_prediction(-1, 0, SpeedClass.EQUAL)


def test_power_law_slope() -> None:
    slope, stderr = fit_log_slope(TIMES, 3.0 * (1 + TIMES) ** -0.125, WINDOW)
    assert slope == pytest.approx(-0.125, abs=1e-12)
    assert stderr == pytest.approx(0.0, abs=1e-10)


def test_constant_norm() -> None:
    slope, _ = fit_log_slope(TIMES, np.full(TIMES.size, 2.0), WINDOW)
    assert slope == pytest.approx(0.0, abs=1e-12)


def test_window_needs_samples() -> None:
    with pytest.raises(InsufficientSamples):
        fit_log_slope(TIMES, np.ones(TIMES.size), (1e6, 2e6))


def test_nonpositive_norms() -> None:
    norms = np.ones(TIMES.size)
    norms[-3] = 0.0
    with pytest.raises(NonPositiveNorm):
        fit_log_slope(TIMES, norms, WINDOW)
    norms[-3] = math.nan
    with pytest.raises(NonPositiveNorm):
        fit_exp_rate(TIMES, norms, WINDOW)


def test_exponential_rate() -> None:
    times = np.linspace(0.0, 100.0, 101)
    # norm = exp(-0.3 t) gives an energy rate of 0.6
    rate, _ = fit_exp_rate(times, np.exp(-0.3 * times), (10.0, 100.0))
    assert rate == pytest.approx(0.6, rel=1e-10)


def test_domination() -> None:
    norms = 3.0 * (1 + TIMES) ** -0.125
    constant, dominated = domination(TIMES, norms, -0.125, WINDOW)
    assert constant == pytest.approx(3.0)
    assert dominated
    # decays slower than predicted inside the window
    _, dominated = domination(TIMES, norms, -0.5, WINDOW)
    assert not dominated


def test_two_term_bound() -> None:
    report = NormReport(
        times=TIMES,
        k=0,
        norms=np.ones(TIMES.size),
        norms_low=2.0 * (1 + TIMES) ** -0.125,
        norms_high=5.0 * (1 + TIMES) ** -1.0,
        l1_init=4.0,
        hs_init={4: 0.5},
    )
    bound = fit_two_term_bound(report, 4, SpeedClass.EQUAL)
    assert bound.C1 == pytest.approx(0.5)
    assert bound.C2 == pytest.approx(10.0)
    np.testing.assert_allclose(bound(TIMES), report.norms_low + report.norms_high)

    # missing initial norms count as one
    missing = NormReport(
        times=TIMES,
        k=0,
        norms=np.ones(TIMES.size),
        norms_low=np.zeros(TIMES.size),
        norms_high=(1 + TIMES) ** -1.0,
        l1_init=None,
    )
    bound = fit_two_term_bound(missing, 4, SpeedClass.EQUAL)
    assert bound.C1 == 0.0
    assert bound.C2 == pytest.approx(1.0)


def _report(exp_rate: float | None) -> RateReport:
    return RateReport(
        k=0,
        l=0,
        speeds=SpeedClass.EQUAL,
        kind=SystemKind.TYPE_I,
        fitted_slope=0.0,
        stderr=0.0,
        predicted_l1_slope=-0.125,
        predicted_reg_slope=0.0,
        governing="regularity",
        window=WINDOW,
        verdict="pass",
        domination_constant=1.0,
        exp_rate=exp_rate,
    )


def test_exponent_ratio() -> None:
    assert exponent_ratio(_report(2.0), _report(0.5)) == 4.0
    assert exponent_ratio(_report(2.0), _report(0.0)) == math.inf
    with pytest.raises(ValueError):
        exponent_ratio(_report(None), _report(1.0))


def test_band_envelope(unit_params: Parameters) -> None:
    experiment = RateExperiment(
        p=unit_params,
        kind=SystemKind.TYPE_I,
        profile=InitialProfile(ProfileKind.BAND, band=(2.0, 4.0)),
        k=0,
        grid=default_grid(),
    )
    assert experiment.band_limited
    fit = band_envelope(experiment, xis=[2.0, 3.0, 4.0])
    assert fit.beta > 0
    assert fit.grid.tolist() == [2.0, 3.0, 4.0]


def test_window_times() -> None:
    times = window_times((1e3, 1e6), 16)
    assert times[0] == 0.0
    assert np.all(np.diff(times) > 0)
    assert np.count_nonzero((times >= 1e3) & (times <= 1e6)) == 16
    assert times[-1] == pytest.approx(1e6)
    # a window starting below t_min still gets a lead-in
    assert window_times((1e-2, 1.0), 8)[1] < 1e-2


def test_band_window() -> None:
    assert band_window(0.5) == (100.0, 1000.0)
    with pytest.raises(ValueError):
        band_window(0.0)


def _band_experiment(p: Parameters) -> RateExperiment:
    return RateExperiment(
        p=p,
        kind=SystemKind.TYPE_I,
        profile=InitialProfile(ProfileKind.BAND, band=(10.0, 20.0)),
        k=0,
        grid=band_grid(10.0, 20.0, 32),
        n_times=24,
    )


def test_speed_companion(unit_params: Parameters, distinct_params: Parameters) -> None:
    equal = _band_experiment(unit_params)
    assert classify_speeds(equal.speed_companion().p) is SpeedClass.DISTINCT
    distinct = replace(_band_experiment(distinct_params), window=(1.0, 2.0))
    companion = distinct.speed_companion()
    assert classify_speeds(companion.p) is SpeedClass.EQUAL
    assert companion.window is None


def test_band_data_decays_at_the_slowest_envelope_rate(params: Parameters) -> None:
    experiment = _band_experiment(params)
    envelope = band_envelope(experiment)
    result = run_rates(experiment, envelope)
    rate = result.rate
    assert rate.exp_rate is not None and rate.envelope_rate is not None
    assert rate.envelope_rate == pytest.approx(slowest_mode_rate(envelope, 20.0))
    # the default window sits on the decay of the slowest mode, before underflow
    assert rate.window == band_window(rate.envelope_rate)
    inside = (result.norms.times >= rate.window[0]) & (result.norms.times <= rate.window[1])
    assert np.all(result.norms.norms[inside] > 0)
    assert abs(rate.exp_rate / rate.envelope_rate - 1) <= EXP_RATE_TOLERANCE, rate.note
    assert rate.verdict == "pass"


def test_band_verdict_is_two_sided(unit_params: Parameters) -> None:
    experiment = _band_experiment(unit_params)
    envelope = band_envelope(experiment, xis=[20.0])
    # an envelope ten times too fast must not pass
    fast = replace(envelope, local_betas=envelope.local_betas * 10)
    rate = run_rates(experiment, fast).rate
    assert rate.exp_rate is not None and rate.envelope_rate is not None
    assert rate.exp_rate < rate.envelope_rate * (1 - EXP_RATE_TOLERANCE)
    assert rate.verdict == "fail"
    assert "ratio" in rate.note


def test_distinct_band_data_decays_slower(
    unit_params: Parameters, distinct_params: Parameters
) -> None:
    equal = run_rates(_band_experiment(unit_params)).rate
    distinct = run_rates(_band_experiment(distinct_params)).rate
    assert exponent_ratio(equal, distinct) > 10


def _gaussian(p: Parameters, k: int) -> RateExperiment:
    return RateExperiment(
        p=p,
        kind=SystemKind.TYPE_I,
        profile=InitialProfile(ProfileKind.GAUSSIAN),
        k=k,
        grid=default_grid(xi_max=20.0, n_geometric=256, n_linear=32),
        l=4,
        n_times=32,
    )


@pytest.mark.slow
def test_gaussian_decays_at_the_low_frequency_rate(unit_params: Parameters) -> None:
    result = run_rates(_gaussian(unit_params, 0))
    assert result.rate.governing == "l1"
    assert result.rate.predicted == -0.125
    assert result.rate.window == (1e3, 1e6)
    assert -0.145 <= result.rate.fitted_slope <= -0.105
    assert result.rate.verdict == "pass"
    assert np.all(result.norms.norms > 0)
    inside = (result.norms.times >= 1e3) & (result.norms.times <= 1e6)
    assert np.count_nonzero(inside) == 32


@pytest.mark.slow
def test_first_derivative_gains_a_quarter(unit_params: Parameters) -> None:
    rate = run_rates(_gaussian(unit_params, 1)).rate
    assert rate.predicted_l1_slope == -0.375
    assert rate.fitted_slope == pytest.approx(-0.375, abs=SLOPE_TOLERANCE)
