"""Tests for Hermitian quadratic forms."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bresselab.functionals.forms import ModulusProduct, QuadraticForm, magnitude, total
from tests.helpers import random_states

scalars = st.complex_numbers(max_magnitude=10.0, allow_nan=False, allow_infinity=False)


def test_norm_sq(rng: np.random.Generator) -> None:
    row, u = random_states(rng, 2, 4)
    assert QuadraticForm.norm_sq(row)(u) == pytest.approx(abs(row @ u) ** 2)


@settings(max_examples=25)
@given(coef=scalars)
def test_cross(coef: complex) -> None:
    rng = np.random.default_rng(3)
    a, b, u = random_states(rng, 3, 5)
    expected = (coef * (a @ u) * np.conj(b @ u)).real
    assert QuadraticForm.cross(coef, a, b)(u) == pytest.approx(expected, abs=1e-9)


def test_cross_matrix_is_hermitian(rng: np.random.Generator) -> None:
    a, b = random_states(rng, 2, 6)
    m = QuadraticForm.cross(2 - 3j, a, b).matrix
    np.testing.assert_allclose(m, m.conj().T)


def test_rate_is_directional_derivative(rng: np.random.Generator) -> None:
    a, b, u = random_states(rng, 3, 6)
    form = QuadraticForm.norm_sq(a) + QuadraticForm.cross(1j, a, b)
    generator = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    v = generator @ u
    h = 1e-3
    # exact for quadratic forms up to rounding
    difference = (form(u + h * v) - form(u - h * v)) / (2 * h)
    assert form.rate(generator, u) == pytest.approx(difference, rel=1e-8)


def test_stacked_evaluation(rng: np.random.Generator) -> None:
    row = random_states(rng, 1, 4)[0]
    u = random_states(rng, 7, 4)
    values = QuadraticForm.norm_sq(row)(u)
    assert values.shape == (7,)
    np.testing.assert_allclose(values, np.abs(u @ row) ** 2)


def test_arithmetic(rng: np.random.Generator) -> None:
    a, b, u = random_states(rng, 3, 4)
    p, q = QuadraticForm.norm_sq(a), QuadraticForm.norm_sq(b)
    assert (p + q)(u) == pytest.approx(p(u) + q(u))
    assert (p - q)(u) == pytest.approx(p(u) - q(u))
    assert (3 * p)(u) == pytest.approx(3 * p(u))
    assert (p * 3)(u) == pytest.approx(3 * p(u))
    assert (-p)(u) == pytest.approx(-p(u))
    assert QuadraticForm.zero(4)(u) == 0.0


def test_modulus_product_and_sums(rng: np.random.Generator) -> None:
    a, b, u = random_states(rng, 3, 4)
    mod = ModulusProduct(2.0, a, b)
    assert mod(u) == pytest.approx(2 * abs(u @ a) * abs(u @ b))
    neg = -QuadraticForm.norm_sq(a)
    assert total([mod, neg], u) == pytest.approx(mod(u) + neg(u))
    assert magnitude([mod, neg], u) == pytest.approx(mod(u) - neg(u))
