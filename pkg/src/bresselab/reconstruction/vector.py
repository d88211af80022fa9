"""The vector solution whose squared length is the mode energy."""

import math

import numpy as np

from bresselab.models.parameters import Parameters, SystemKind
from bresselab.models.state import ComplexArray, ModeState
from bresselab.spectral.generator import Rows


def vector_rows(p: Parameters, kind: SystemKind, xi: float) -> ComplexArray:
    """Matrix R(xi) with |R(xi) u|^2 equal to the energy of the mode state u.

    Every row is affine in xi, so R(xi) = R0 + i xi R1 with constant R0, R1.
    """
    r = Rows(p, kind, xi)
    sqrt = math.sqrt
    rows = [
        sqrt(p.rho1) * r["phi_t"],
        sqrt(p.rho2) * r["psi_t"],
        sqrt(p.rho1) * r["omega_t"],
    ]
    if kind is SystemKind.TYPE_I:
        rows += [sqrt(p.gamma / p.m1) * r["theta1"], sqrt(p.gamma / p.m2) * r["theta2"]]
    else:
        rows += [
            sqrt(p.gamma / p.m1) * r["theta1_t"],
            sqrt(p.k1 * p.gamma / p.m1) * 1j * xi * r["theta1"],
            sqrt(p.gamma / p.m2) * r["theta2_t"],
            sqrt(p.k2 * p.gamma / p.m2) * 1j * xi * r["theta2"],
        ]
    rows += [
        sqrt(p.b) * 1j * xi * r["psi"],
        sqrt(p.k) * r.shear,
        sqrt(p.k0) * r.axial,
    ]
    return np.array(rows, dtype=np.complex128)


def vector_solution_components(s: ModeState, p: Parameters) -> ComplexArray:
    return vector_rows(p, s.kind, s.xi) @ s.u


def derivative_split(p: Parameters, kind: SystemKind) -> tuple[ComplexArray, ComplexArray]:
    """(R0, R1) with R(xi) = R0 + i xi R1."""
    r0 = vector_rows(p, kind, 0.0)
    r1 = (vector_rows(p, kind, 1.0) - r0) / 1j
    return r0, r1
