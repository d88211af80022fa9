"""Hermitian quadratic forms on mode states.

Every energy-type functional is Re(u^H Q u) for a Hermitian Q, so its time
derivative along dU/dt = A U is exactly 2 Re(u^H Q A u).
"""

from dataclasses import dataclass

import numpy as np

from bresselab.models.grid import FloatArray
from bresselab.models.state import ComplexArray


@dataclass(frozen=True)
class QuadraticForm:
    """u -> Re(u^H Q u); evaluates single states or stacks (last axis)."""

    matrix: ComplexArray

    @classmethod
    def zero(cls, dim: int) -> "QuadraticForm":
        return cls(np.zeros((dim, dim), dtype=np.complex128))

    @classmethod
    def norm_sq(cls, row: ComplexArray) -> "QuadraticForm":
        """|row . u|^2."""
        return cls(np.outer(np.conj(row), row))

    @classmethod
    def cross(cls, coef: complex, a: ComplexArray, b: ComplexArray) -> "QuadraticForm":
        """Re(coef (a . u) conj(b . u))."""
        m = np.outer(np.conj(b), a)
        return cls((coef * m + np.conj(coef) * m.conj().T) / 2)

    def __call__(self, u: ComplexArray) -> FloatArray:
        return np.einsum("...i,ij,...j->...", np.conj(u), self.matrix, u).real

    def rate(self, generator: ComplexArray, u: ComplexArray) -> FloatArray:
        """Time derivative along dU/dt = generator @ U."""
        au = u @ generator.T
        return 2.0 * np.einsum("...i,ij,...j->...", np.conj(u), self.matrix, au).real

    def __add__(self, other: "QuadraticForm") -> "QuadraticForm":
        return QuadraticForm(self.matrix + other.matrix)

    def __sub__(self, other: "QuadraticForm") -> "QuadraticForm":
        return QuadraticForm(self.matrix - other.matrix)

    def __mul__(self, c: float) -> "QuadraticForm":
        return QuadraticForm(c * self.matrix)

    __rmul__ = __mul__

    def __neg__(self) -> "QuadraticForm":
        return QuadraticForm(-self.matrix)


@dataclass(frozen=True)
class ModulusProduct:
    """coef |a . u| |b . u|, the shape of Cauchy-Schwarz bounds."""

    coef: float
    a: ComplexArray
    b: ComplexArray

    def __call__(self, u: ComplexArray) -> FloatArray:
        return self.coef * np.abs(u @ self.a) * np.abs(u @ self.b)


def total(terms: list[QuadraticForm | ModulusProduct], u: ComplexArray) -> FloatArray:
    """Sum of the terms at u."""
    out = np.zeros(np.shape(u)[:-1])
    for term in terms:
        out = out + term(u)
    return out


def magnitude(terms: list[QuadraticForm | ModulusProduct], u: ComplexArray) -> FloatArray:
    """Sum of |term(u)|, the scale rounding errors are measured against."""
    out = np.zeros(np.shape(u)[:-1])
    for term in terms:
        out = out + np.abs(term(u))
    return out
