"""Mode energy and its dissipation."""

import dataclasses
import logging

import numpy as np

from bresselab.functionals.forms import QuadraticForm
from bresselab.models.grid import FloatArray
from bresselab.models.parameters import Parameters, SystemKind
from bresselab.models.reports import ResidualReport
from bresselab.models.state import ModeState, Trajectory
from bresselab.spectral.generator import Rows

logger = logging.getLogger(__name__)

# Relative residual accepted for the exact energy balance
DISSIPATION_TOLERANCE = 1e-9


def elastic_form(p: Parameters, kind: SystemKind, xi: float) -> QuadraticForm:
    """Kinetic plus strain energy of the beam (no thermal part)."""
    r = Rows(p, kind, xi)
    sq = QuadraticForm.norm_sq
    return (
        p.rho1 * sq(r["phi_t"])
        + p.rho2 * sq(r["psi_t"])
        + p.rho1 * sq(r["omega_t"])
        + p.b * xi**2 * sq(r["psi"])
        + p.k * sq(r.shear)
        + p.k0 * sq(r.axial)
    )


def thermal_form(p: Parameters, kind: SystemKind, xi: float) -> QuadraticForm:
    r = Rows(p, kind, xi)
    sq = QuadraticForm.norm_sq
    form = p.gamma / p.m1 * sq(r.heat1) + p.gamma / p.m2 * sq(r.heat2)
    if kind is SystemKind.TYPE_III:
        form = form + xi**2 * p.gamma * (
            p.k1 / p.m1 * sq(r["theta1"]) + p.k2 / p.m2 * sq(r["theta2"])
        )
    return form


def energy_form(p: Parameters, kind: SystemKind, xi: float) -> QuadraticForm:
    return elastic_form(p, kind, xi) + thermal_form(p, kind, xi)


def dissipation_form(p: Parameters, kind: SystemKind, xi: float) -> QuadraticForm:
    """dE/dt as a (nonpositive) quadratic form in the coupling temperatures."""
    r = Rows(p, kind, xi)
    sq = QuadraticForm.norm_sq
    if kind is SystemKind.TYPE_I:
        c1, c2 = p.k1 / p.m1, p.k2 / p.m2
    else:
        c1, c2 = p.alpha1 / p.m1, p.alpha2 / p.m2
    return -2.0 * p.gamma * xi**2 * (c1 * sq(r.heat1) + c2 * sq(r.heat2))


def mode_energy(s: ModeState, p: Parameters) -> float:
    return float(energy_form(p, s.kind, s.xi)(s.u))


def dissipation(s: ModeState, p: Parameters) -> float:
    return float(dissipation_form(p, s.kind, s.xi)(s.u))


def trajectory_energies(tr: Trajectory, p: Parameters) -> FloatArray:
    return np.asarray(energy_form(p, tr.kind, tr.xi)(tr.u), dtype=float)


def attach_energies(tr: Trajectory, p: Parameters) -> Trajectory:
    """Copy of ``tr`` with the energy of every sample filled in."""
    return dataclasses.replace(tr, energies=trajectory_energies(tr, p))


def check_dissipation_identity(tr: Trajectory, p: Parameters) -> ResidualReport:
    """Compare the chain-rule energy derivative with the closed-form dissipation.

    The derivative uses the trajectory's own generator, so a corrupted matrix
    shows up as a residual.
    """
    energy = energy_form(p, tr.kind, tr.xi)
    chain_rule = energy.rate(tr.generator.matrix, tr.u)
    closed_form = dissipation_form(p, tr.kind, tr.xi)(tr.u)
    residual = np.abs(chain_rule - closed_form) / (1.0 + energy(tr.u))
    worst = float(np.max(residual))
    if worst > DISSIPATION_TOLERANCE:
        logger.warning("xi=%g: energy balance residual %.3e", tr.xi, worst)
    return ResidualReport(
        lemma_id="dissipation",
        max_violation=worst,
        fitted_constant=0.0,
        n_samples=len(tr),
        tolerance=DISSIPATION_TOLERANCE,
    )
