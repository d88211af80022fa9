"""Tests for initial profiles, the vector solution and Sobolev norms."""

import math

import numpy as np
import pytest

from bresselab.errors import BadAssignment, NonPositiveCoefficient, TailTooFat
from bresselab.functionals import mode_energy
from bresselab.models.grid import FrequencyGrid, band_grid, default_grid
from bresselab.models.parameters import Parameters, SystemKind
from bresselab.models.state import ModeState
from bresselab.reconstruction import (
    InitialProfile,
    ProfileKind,
    check_tail,
    hs_norm,
    initial_mode_state,
    l1_bound,
    norm_report,
    sobolev_norm,
    vector_rows,
    vector_solution_components,
)
from tests.helpers import random_states

GAUSSIAN = InitialProfile(ProfileKind.GAUSSIAN)
BAND = InitialProfile(ProfileKind.BAND, band=(10.0, 20.0))


@pytest.fixture
def small_grid() -> FrequencyGrid:
    return default_grid(xi_max=20.0, n_geometric=256, n_linear=32)


def test_vector_length_is_energy(
    kind: SystemKind, params: Parameters, rng: np.random.Generator
) -> None:
    for xi, u in zip((0.0, 0.5, 3.0), random_states(rng, 3, kind.dim), strict=True):
        s = ModeState(kind, xi, u)
        v = vector_solution_components(s, params)
        assert np.sum(np.abs(v) ** 2) == pytest.approx(mode_energy(s, params), rel=1e-12)


def test_vector_components(unit_params: Parameters) -> None:
    assert vector_rows(unit_params, SystemKind.TYPE_I, 1.0).shape == (8, 8)
    assert vector_rows(unit_params, SystemKind.TYPE_III, 1.0).shape == (10, 10)
    zero = ModeState.zero(SystemKind.TYPE_III, 2.0)
    assert not np.any(vector_solution_components(zero, unit_params))


def test_transforms() -> None:
    assert GAUSSIAN.transform(0.0) == pytest.approx(math.sqrt(2 * math.pi))
    assert BAND.transform(5.0) == 0.0
    assert BAND.transform(-15.0) == 1.0
    box = InitialProfile(ProfileKind.BOX, halfwidth=1.0)
    xi = np.array([0.5, 2.0, 7.0])
    np.testing.assert_allclose(box.transform(xi), 2 * np.sin(xi) / xi, rtol=1e-12)
    dgauss = InitialProfile(ProfileKind.DGAUSS, order=2)
    np.testing.assert_allclose(dgauss.transform(xi), -(xi**2) * GAUSSIAN.transform(xi))


def test_profile_slots() -> None:
    with pytest.raises(BadAssignment):
        InitialProfile(ProfileKind.GAUSSIAN, slots=("chi",))
    with pytest.raises(BadAssignment):
        InitialProfile(ProfileKind.GAUSSIAN, slots=())
    profile = InitialProfile(ProfileKind.GAUSSIAN, slots=("theta1_t",))
    profile.check(SystemKind.TYPE_III)
    with pytest.raises(BadAssignment):
        profile.check(SystemKind.TYPE_I)


def test_initial_mode_state(unit_params: Parameters) -> None:
    profile = InitialProfile(ProfileKind.GAUSSIAN, slots=("phi", "psi_t"))
    s = initial_mode_state(profile, unit_params, SystemKind.TYPE_I, 0.0)
    assert s.component("phi") == pytest.approx(math.sqrt(2 * math.pi))
    assert s.component("psi_t") == s.component("phi")
    assert s.component("omega") == 0
    with pytest.raises(NonPositiveCoefficient):
        initial_mode_state(profile, Parameters(rho1=-1.0), SystemKind.TYPE_I, 0.0)


def test_derivative_l1() -> None:
    assert GAUSSIAN.derivative_l1(0) == pytest.approx(math.sqrt(2 * math.pi))
    assert GAUSSIAN.derivative_l1(1) == 2.0
    assert GAUSSIAN.derivative_l1(3) is None
    assert InitialProfile(ProfileKind.DGAUSS, order=1).derivative_l1(0) == 2.0
    assert InitialProfile(ProfileKind.BOX, halfwidth=3.0).derivative_l1(0) == 6.0
    assert BAND.derivative_l1(0) is None


def test_l1_bound(unit_params: Parameters) -> None:
    kind = SystemKind.TYPE_I
    assert l1_bound(unit_params, kind, GAUSSIAN) == pytest.approx(math.sqrt(2 * math.pi))
    # phi enters the shear through i xi phi and the axial strain through -l phi
    displacement = InitialProfile(ProfileKind.GAUSSIAN, slots=("phi",))
    assert l1_bound(unit_params, kind, displacement) == pytest.approx(
        math.sqrt(2 * math.pi) + 2.0
    )
    assert l1_bound(unit_params, kind, BAND) is None


def test_initial_norm_closed_form(unit_params: Parameters, small_grid: FrequencyGrid) -> None:
    # E0 = 2 pi exp(-xi^2), so ||V0||^2 = (1/pi) * 2 pi * sqrt(pi) / 2
    norm = sobolev_norm(unit_params, SystemKind.TYPE_I, GAUSSIAN, 0, 0.0, small_grid)
    assert norm == pytest.approx(math.pi**0.25, rel=1e-6)
    # ||V0'||^2 = 2 * integral xi^2 exp(-xi^2) = sqrt(pi) / 2
    first = sobolev_norm(unit_params, SystemKind.TYPE_I, GAUSSIAN, 1, 0.0, small_grid)
    assert first == pytest.approx(math.sqrt(math.sqrt(math.pi) / 2), rel=1e-6)
    assert hs_norm(unit_params, SystemKind.TYPE_I, GAUSSIAN, 1, small_grid) == pytest.approx(
        first, rel=1e-10
    )


def test_negative_time(unit_params: Parameters, small_grid: FrequencyGrid) -> None:
    with pytest.raises(ValueError):
        sobolev_norm(unit_params, SystemKind.TYPE_I, GAUSSIAN, 0, -1.0, small_grid)
    with pytest.raises(ValueError):
        norm_report(unit_params, SystemKind.TYPE_I, GAUSSIAN, -1, np.zeros(1), small_grid)


def test_refinement_converges(unit_params: Parameters, small_grid: FrequencyGrid) -> None:
    coarse = sobolev_norm(unit_params, SystemKind.TYPE_III, GAUSSIAN, 0, 10.0, small_grid)
    fine = sobolev_norm(
        unit_params, SystemKind.TYPE_III, GAUSSIAN, 0, 10.0, small_grid.refined()
    )
    assert fine == pytest.approx(coarse, rel=1e-6)


def test_norms_do_not_grow(
    kind: SystemKind, params: Parameters, small_grid: FrequencyGrid
) -> None:
    times = np.array([0.0, 1.0, 10.0, 100.0, 1000.0])
    report = norm_report(params, kind, GAUSSIAN, 0, times, small_grid, l_orders=(2,))
    assert np.all(np.diff(report.norms) <= 1e-9 * report.norms[0])
    assert not np.any(report.transient)
    parts = report.norms_low**2 + report.norms_high**2
    np.testing.assert_allclose(parts, report.norms**2, rtol=1e-10)
    assert set(report.hs_init) == {2}
    assert report.l1_init == pytest.approx(math.sqrt(2 * math.pi))


def test_band_derivatives_scale_with_the_band(unit_params: Parameters) -> None:
    grid = band_grid(10.0, 20.0, 64)
    kind = SystemKind.TYPE_I
    times = np.array([0.0, 5.0])
    plain = norm_report(unit_params, kind, BAND, 0, times, grid)
    first = norm_report(unit_params, kind, BAND, 1, times, grid)
    assert np.all(first.norms >= 10.0 * plain.norms * (1 - 1e-9))
    assert np.all(first.norms <= 20.0 * plain.norms * (1 + 1e-9))
    assert np.all(plain.norms_low == 0.0)
    assert plain.l1_init is None


def test_tail_check(unit_params: Parameters, small_grid: FrequencyGrid) -> None:
    kind = SystemKind.TYPE_I
    assert check_tail(unit_params, kind, BAND, 0, band_grid(10.0, 20.0, 8)) == 0.0
    assert check_tail(unit_params, kind, GAUSSIAN, 0, small_grid) <= 1e-6
    box = InitialProfile(ProfileKind.BOX)
    with pytest.raises(TailTooFat):
        check_tail(unit_params, kind, box, 0, small_grid)
