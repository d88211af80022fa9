"""Generator matrices of the Fourier-transformed Bresse systems.

For a frequency xi the mode equations become a linear constant-coefficient
system dU/dt = A(xi) U. Writing S = i xi phi - psi - l omega (shear) and
A = i xi omega - l phi (axial strain), the Type I rows read

    rho1 phi_tt   = i k xi S + k0 l A - l gamma theta1
    rho2 psi_tt   = -b xi^2 psi + k S - i gamma xi theta2
    rho1 omega_tt = i k0 xi A + k l S - i gamma xi theta1
    theta1_t      = -k1 xi^2 theta1 - m1 (i xi omega_t - l phi_t)
    theta2_t      = -k2 xi^2 theta2 - i m2 xi psi_t

Type III replaces theta_i by theta_i_t in the elastic rows and makes the heat
rows second order with the extra -alpha_i xi^2 theta_i_t damping.
"""

from enum import StrEnum

import numpy as np

from bresselab.models.parameters import Parameters, SystemKind
from bresselab.models.state import ComplexArray, Generator, layout


class Coupling(StrEnum):
    """Individually sign-flippable terms of the generator (mutation testing)."""

    PHI_SHEAR = "phi_shear"
    PHI_AXIAL = "phi_axial"
    PHI_HEAT = "phi_heat"
    PSI_SHEAR = "psi_shear"
    PSI_HEAT = "psi_heat"
    OMEGA_AXIAL = "omega_axial"
    OMEGA_SHEAR = "omega_shear"
    OMEGA_HEAT = "omega_heat"
    THETA1_STRAIN = "theta1_strain"
    THETA2_STRAIN = "theta2_strain"


class Rows:
    """Row vectors picking components and strain combinations out of a state."""

    def __init__(self, p: Parameters, kind: SystemKind, xi: float) -> None:
        self.kind = kind
        self.index = {name: i for i, name in enumerate(layout(kind))}
        self._eye = np.eye(kind.dim, dtype=np.complex128)
        self.shear = 1j * xi * self["phi"] - self["psi"] - p.l * self["omega"]
        self.axial = 1j * xi * self["omega"] - p.l * self["phi"]
        self.axial_rate = 1j * xi * self["omega_t"] - p.l * self["phi_t"]
        # Temperature variable entering the elastic equations
        if kind is SystemKind.TYPE_I:
            self.heat1, self.heat2 = self["theta1"], self["theta2"]
        else:
            self.heat1, self.heat2 = self["theta1_t"], self["theta2_t"]

    def __getitem__(self, name: str) -> ComplexArray:
        return self._eye[self.index[name]]


def build_generator(
    p: Parameters,
    kind: SystemKind,
    xi: float,
    flipped: Coupling | None = None,
) -> Generator:
    """Assemble A(xi); ``flipped`` reverses the sign of one coupling term."""

    def sign(term: Coupling) -> float:
        return -1.0 if term is flipped else 1.0

    r = Rows(p, kind, xi)
    ix = r.index
    a = np.zeros((kind.dim, kind.dim), dtype=np.complex128)

    a[ix["phi"]] = r["phi_t"]
    a[ix["psi"]] = r["psi_t"]
    a[ix["omega"]] = r["omega_t"]
    a[ix["phi_t"]] = (
        sign(Coupling.PHI_SHEAR) * 1j * p.k * xi * r.shear
        + sign(Coupling.PHI_AXIAL) * p.k0 * p.l * r.axial
        - sign(Coupling.PHI_HEAT) * p.l * p.gamma * r.heat1
    ) / p.rho1
    a[ix["psi_t"]] = (
        -p.b * xi**2 * r["psi"]
        + sign(Coupling.PSI_SHEAR) * p.k * r.shear
        - sign(Coupling.PSI_HEAT) * 1j * p.gamma * xi * r.heat2
    ) / p.rho2
    a[ix["omega_t"]] = (
        sign(Coupling.OMEGA_AXIAL) * 1j * p.k0 * xi * r.axial
        + sign(Coupling.OMEGA_SHEAR) * p.k * p.l * r.shear
        - sign(Coupling.OMEGA_HEAT) * 1j * p.gamma * xi * r.heat1
    ) / p.rho1

    theta1_drive = sign(Coupling.THETA1_STRAIN) * p.m1 * r.axial_rate
    theta2_drive = sign(Coupling.THETA2_STRAIN) * 1j * p.m2 * xi * r["psi_t"]
    if kind is SystemKind.TYPE_I:
        a[ix["theta1"]] = -p.k1 * xi**2 * r["theta1"] - theta1_drive
        a[ix["theta2"]] = -p.k2 * xi**2 * r["theta2"] - theta2_drive
    else:
        a[ix["theta1"]] = r["theta1_t"]
        a[ix["theta1_t"]] = (
            -p.k1 * xi**2 * r["theta1"] - p.alpha1 * xi**2 * r["theta1_t"] - theta1_drive
        )
        a[ix["theta2"]] = r["theta2_t"]
        a[ix["theta2_t"]] = (
            -p.k2 * xi**2 * r["theta2"] - p.alpha2 * xi**2 * r["theta2_t"] - theta2_drive
        )

    return Generator(
        xi=xi,
        kind=kind,
        matrix=a,
        flipped=flipped.value if flipped is not None else None,
    )
