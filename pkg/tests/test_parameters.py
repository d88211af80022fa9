"""Tests for coefficients, speed classes and configuration models."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from bresselab.errors import ConfigError, NonPositiveCoefficient
from bresselab.models.config import (
    DEFAULT_WINDOW,
    ExperimentConfig,
    LyapunovConfig,
    default_lyapunov_config,
)
from bresselab.models.parameters import (
    Parameters,
    SpeedClass,
    SystemKind,
    classify_speeds,
    validate,
)
from bresselab.parallel import default_threads

positive = st.floats(min_value=0.1, max_value=10.0)


class TestSpeedClass:
    def test_unit_parameters_are_equal(self) -> None:
        assert classify_speeds(Parameters()) is SpeedClass.EQUAL

    def test_b_breaks_equality(self) -> None:
        assert classify_speeds(Parameters(b=2.0)) is SpeedClass.DISTINCT

    def test_k0_breaks_equality(self) -> None:
        assert classify_speeds(Parameters(k0=2.0)) is SpeedClass.DISTINCT

    @given(scale=positive)
    def test_scaling_both_ratios_keeps_equality(self, scale: float) -> None:
        p = Parameters(rho1=scale, k=scale, k0=scale)
        assert classify_speeds(p) is SpeedClass.EQUAL

    def test_tolerance_is_relative(self) -> None:
        assert classify_speeds(Parameters(b=1.0 + 1e-14)) is SpeedClass.EQUAL
        assert classify_speeds(Parameters(b=1.0 + 1e-6)) is SpeedClass.DISTINCT


class TestValidate:
    @pytest.mark.parametrize("name", ["rho1", "b", "k0", "l", "m2"])
    def test_nonpositive_coefficient_is_named(self, name: str) -> None:
        p = Parameters(**{name: 0.0})
        with pytest.raises(NonPositiveCoefficient) as info:
            validate(p, SystemKind.TYPE_I)
        assert info.value.name == name

    def test_infinite_coefficient(self) -> None:
        with pytest.raises(NonPositiveCoefficient):
            validate(Parameters(k=math.inf), SystemKind.TYPE_I)

    def test_gamma_zero_needs_degenerate_flag(self) -> None:
        p = Parameters(gamma=0.0)
        with pytest.raises(NonPositiveCoefficient):
            validate(p, SystemKind.TYPE_I)
        validate(p, SystemKind.TYPE_I, allow_degenerate=True)

    def test_alpha_only_checked_for_type_iii(self) -> None:
        p = Parameters(alpha1=-1.0)
        validate(p, SystemKind.TYPE_I)
        with pytest.raises(NonPositiveCoefficient) as info:
            validate(p, SystemKind.TYPE_III)
        assert info.value.name == "alpha1"

    def test_is_a_config_error(self) -> None:
        assert issubclass(NonPositiveCoefficient, ConfigError)


class TestParameters:
    def test_frozen(self) -> None:
        with pytest.raises(ValidationError):
            Parameters().rho1 = 2.0  # type: ignore[misc]

    @given(factor=positive)
    def test_scaled(self, factor: float) -> None:
        p = Parameters(b=3.0).scaled(b=factor, gamma=2.0)
        assert p.b == pytest.approx(3.0 * factor)
        assert p.gamma == 2.0
        assert p.rho1 == 1.0

    def test_required_names(self) -> None:
        p = Parameters()
        assert "alpha1" not in p.required_names(SystemKind.TYPE_I)
        assert "alpha2" in p.required_names(SystemKind.TYPE_III)

    def test_dims(self) -> None:
        assert SystemKind.TYPE_I.dim == 8
        assert SystemKind.TYPE_III.dim == 10


class TestLyapunovConfig:
    @pytest.mark.parametrize("kind", list(SystemKind))
    @pytest.mark.parametrize("p", [Parameters(), Parameters(b=2.0), Parameters(l=0.5)])
    def test_default_weights_are_admissible(self, p: Parameters, kind: SystemKind) -> None:
        cfg = default_lyapunov_config(p, kind)
        cfg.check(p, kind, classify_speeds(p))
        assert cfg.eps3 > 0

    def test_delta_ceiling(self) -> None:
        p = Parameters()
        cfg = default_lyapunov_config(p, SystemKind.TYPE_I).with_updates(delta=0.9)
        with pytest.raises(ConfigError):
            cfg.check(p, SystemKind.TYPE_I, SpeedClass.EQUAL)

    def test_eps1_ceiling(self) -> None:
        p = Parameters()
        cfg = default_lyapunov_config(p, SystemKind.TYPE_I).with_updates(eps1=0.5)
        with pytest.raises(ConfigError):
            cfg.check(p, SystemKind.TYPE_I, SpeedClass.EQUAL)

    def test_weights_must_be_positive(self) -> None:
        with pytest.raises(ValidationError):
            LyapunovConfig(
                eps1=1, eps2=1, eps3=0, eps4=1, lambda1=1, lambda2=1, delta=0.1
            )


class TestExperimentConfig:
    def test_hash_is_stable(self) -> None:
        assert ExperimentConfig().config_hash() == ExperimentConfig().config_hash()
        assert len(ExperimentConfig().config_hash()) == 16

    def test_hash_ignores_execution_fields(self) -> None:
        base = ExperimentConfig()
        assert base.config_hash() == ExperimentConfig(out="elsewhere", threads=8).config_hash()

    def test_hash_tracks_results(self) -> None:
        base = ExperimentConfig()
        assert base.config_hash() != ExperimentConfig(seed=1).config_hash()
        changed = ExperimentConfig(parameters=Parameters(gamma=2.0))
        assert base.config_hash() != changed.config_hash()

    def test_rejects_bad_values(self) -> None:
        with pytest.raises(ValidationError):
            ExperimentConfig(sigma=-1.0)
        with pytest.raises(ValidationError):
            ExperimentConfig(profile="triangle")  # type: ignore[arg-type]

    @pytest.mark.parametrize(
        "fields",
        [
            {"band_lo": 20.0, "band_hi": 10.0},
            {"band_lo": 10.0, "band_hi": 10.0},
            {"xi_min": 5.0, "xi_max": 1.0},
            {"window_min": 1e4, "window_max": 1e3},
            {"window_max": 10.0},
        ],
    )
    def test_ranges_must_be_ordered(self, fields: dict[str, float]) -> None:
        with pytest.raises(ValidationError):
            ExperimentConfig(**fields)

    def test_window_defaults(self) -> None:
        assert ExperimentConfig().window_min is None
        assert ExperimentConfig().window == DEFAULT_WINDOW
        assert ExperimentConfig(window_max=1e5).window == (1e3, 1e5)

    def test_threads_default_to_physical_cores(self) -> None:
        assert ExperimentConfig().threads == default_threads()
        with pytest.raises(ValidationError):
            ExperimentConfig(threads=0)
