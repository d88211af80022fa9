"""Sample-based certification of the differential inequalities of the ladder.

Each inequality has the shape

    dF/dt + coercive <= explicit + C * majorant

where ``explicit`` collects the terms written out in full (cross terms and
modulus products) and ``C`` is the free constant Young's inequality produces.
The check fits the smallest admissible C over the samples.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from bresselab.errors import UnknownLemma, WrongKind
from bresselab.functionals.forms import ModulusProduct, QuadraticForm, magnitude, total
from bresselab.functionals.lyapunov import FunctionalId, functional_form
from bresselab.models.config import LyapunovConfig, shear_coercivity
from bresselab.models.parameters import Parameters, SpeedClass, SystemKind, classify_speeds
from bresselab.models.reports import ResidualReport
from bresselab.models.state import Trajectory
from bresselab.spectral.generator import Rows

logger = logging.getLogger(__name__)

# Rounding allowance relative to the size of the terms being compared
SLACK = 1e-10
# Majorants below this fraction of the term size count as zero
MAJORANT_FLOOR = 1e-13

Term = QuadraticForm | ModulusProduct

LADDER = (
    FunctionalId.J1,
    FunctionalId.T1,
    FunctionalId.T2,
    FunctionalId.J2,
    FunctionalId.J3,
    FunctionalId.J4,
    FunctionalId.K,
    FunctionalId.H,
)


@dataclass(frozen=True)
class LemmaTerms:
    functional: QuadraticForm
    coercive: QuadraticForm
    explicit: list[Term]
    majorant: QuadraticForm


def lemma_ids(kind: SystemKind) -> tuple[FunctionalId, ...]:
    """Inequalities available for ``kind``."""
    if kind is SystemKind.TYPE_III:
        return (*LADDER, FunctionalId.S)
    return LADDER


def _resolve(lemma_id: FunctionalId | str, kind: SystemKind) -> FunctionalId:
    try:
        name = FunctionalId(lemma_id)
    except ValueError:
        raise UnknownLemma(f"no inequality registered as {lemma_id!r}") from None
    if name is FunctionalId.S and kind is not SystemKind.TYPE_III:
        raise WrongKind("the S inequality only exists for the Type III system")
    if name not in lemma_ids(kind):
        raise UnknownLemma(f"no inequality registered as {lemma_id!r}")
    return name


def lemma_terms(
    lemma_id: FunctionalId | str,
    p: Parameters,
    kind: SystemKind,
    xi: float,
    cfg: LyapunovConfig,
    speeds: SpeedClass,
) -> LemmaTerms:
    """Coercive, explicit and majorant parts of one inequality at frequency xi."""
    name = _resolve(lemma_id, kind)
    r = Rows(p, kind, xi)
    sq = QuadraticForm.norm_sq
    cross = QuadraticForm.cross
    mod = ModulusProduct
    ax = abs(xi)
    type3 = kind is SystemKind.TYPE_III
    equal = speeds is SpeedClass.EQUAL
    h1, h2 = r.heat1, r.heat2
    functional = functional_form(name, p, kind, xi, cfg, speeds)

    match name:
        case FunctionalId.J1:
            coercive = p.m2 * p.rho2 / 2 * xi**2 * sq(r["psi_t"])
            explicit: list[Term] = [mod(p.b * ax**3, r["psi"], h2), mod(p.k * ax, h2, r.shear)]
            if type3:
                explicit.append(mod(p.k2 * p.rho2 * ax**3, r["psi"], h2))
            majorant = (1 + xi**2) * xi**2 * sq(h2)

        case FunctionalId.T1:
            coercive = p.k0 * p.l / 2 * sq(r.axial)
            if type3:
                explicit = [
                    mod(p.alpha1 * p.rho1 / p.m1 * xi**2, r["phi_t"], h1),
                    cross(-1j * p.k * xi, r.shear, r.axial),
                    cross(-1j * p.k * xi / p.m1, r.shear, h1),
                    cross(p.rho1 * p.k1 / p.m1 * xi**2, r["phi_t"], r["theta1"]),
                ]
            else:
                explicit = [
                    mod(p.rho1 * p.k1 / p.m1 * xi**2, r["phi_t"], h1),
                    cross(-1j * p.k * xi, r.shear, r.axial),
                    mod(p.k / p.m1 * ax, h1, r.shear),
                ]
            majorant = sq(h1)

        case FunctionalId.T2:
            coercive = p.k0 / 2 * xi**2 * sq(r.axial)
            if type3:
                explicit = [
                    mod(p.alpha1 * p.rho1 / p.m1 * ax**3, r["omega_t"], h1),
                    cross(1j * p.k * p.l * xi, r.shear, r.axial),
                    cross(1j * p.k * p.l * xi / p.m1, r.shear, h1),
                    cross(-1j * p.k1 * p.rho1 / p.m1 * xi**3, r["omega_t"], r["theta1"]),
                ]
            else:
                explicit = [
                    mod(p.rho1 * p.k1 / p.m1 * ax**3, r["omega_t"], h1),
                    cross(1j * p.k * p.l * xi, r.shear, r.axial),
                    mod(p.k * p.l / p.m1 * ax, h1, r.shear),
                ]
            majorant = xi**2 * sq(h1)

        case FunctionalId.J2:
            coercive = p.k0 * cfg.delta * (1 + xi**2) * sq(r.axial)
            rate = p.alpha1 if type3 else p.k1
            explicit = [
                mod(p.rho1 * p.l * rate / p.m1 * xi**2, r["phi_t"], h1),
                mod(p.rho1 * rate / p.m1 * ax**3, r["omega_t"], h1),
            ]
            if not type3:
                explicit.append(mod(2 * p.k * p.l / p.m1 * ax, r.shear, h1))
            majorant = (1 + xi**2) * sq(h1)

        case FunctionalId.J3:
            coercive = p.k / 2 * sq(r.shear)
            explicit = [
                p.rho2 * sq(r["psi_t"]),
                cross(p.rho2 * p.l, r["psi_t"], r["omega_t"]),
                mod(p.b * p.l * p.gamma / p.k * ax, r["psi"], h1),
            ]
            if equal:
                explicit.append(cross(-1j * p.b * p.l * xi, r["psi"], r.axial))
            else:
                explicit += [
                    cross(1j * (p.rho2 - p.b * p.rho1 / p.k) * xi, r["psi_t"], r["phi_t"]),
                    cross(-1j * p.k0 * p.b * p.l / p.k * xi, r["psi"], r.axial),
                ]
            majorant = xi**2 * sq(h2)

        case FunctionalId.J4:
            coercive = p.b * (p.rho2 * p.l**2 / p.rho1 - cfg.eps1 / 2) * xi**2 * sq(r["psi"])
            explicit = [
                p.rho2**2 * p.l**2 / p.rho1 * sq(r["psi_t"]),
                cross(-p.rho2 * p.l, r["omega_t"], r["psi_t"]),
                cross(1j * p.rho2 * p.k0 * p.l / p.rho1 * xi, r["psi"], r.axial),
            ]
            majorant = sq(h1) + sq(h2)

        case FunctionalId.K:
            coercive = (p.rho2 * p.l**2 / p.rho1 - cfg.eps1) * p.b * xi**2 * sq(
                r["psi"]
            ) + p.k / 2 * sq(r.shear)
            explicit = [p.rho2 * shear_coercivity(p) * sq(r["psi_t"])]
            if not equal:
                explicit += [
                    cross(
                        1j * (p.rho2 / p.rho1 - p.b / p.k) * p.k0 * p.l * xi, r["psi"], r.axial
                    ),
                    cross(1j * (p.rho2 - p.b * p.rho1 / p.k) * xi, r["psi_t"], r["phi_t"]),
                ]
            majorant = sq(h1) + (1 + xi**2) * sq(h2)

        case FunctionalId.H:
            coercive = p.rho1 * p.l * sq(r["phi_t"]) + p.rho1 * p.l / 2 * sq(r["omega_t"])
            if equal:
                explicit = [
                    p.rho2 * p.k / (2 * p.b * p.l) * sq(r["psi_t"]),
                    3 * p.k * p.l / 2 * sq(r.shear),
                    3 * p.k0 * p.l / 2 * sq(r.axial),
                ]
                majorant = (1 + xi**2) * sq(h1)
            else:
                explicit = [p.rho1 / (2 * p.l) * sq(r["psi_t"])]
                majorant = sq(r.shear) + (1 + xi**2) * (sq(r.axial) + sq(h1))

        case FunctionalId.S:
            coercive = p.gamma * xi**4 * (
                p.k1 / p.m1 * sq(r["theta1"]) + p.k2 / p.m2 * sq(r["theta2"])
            )
            explicit = [
                mod(p.gamma * xi**2, r["theta1_t"], r.axial),
                mod(p.gamma * ax**3, r["psi"], r["theta2_t"]),
                p.gamma / p.m1 * xi**2 * sq(r["theta1_t"]),
                p.gamma / p.m2 * xi**2 * sq(r["theta2_t"]),
            ]
            majorant = QuadraticForm.zero(kind.dim)

        case _:
            raise UnknownLemma(f"no inequality registered as {lemma_id!r}")

    return LemmaTerms(functional, coercive, explicit, majorant)


def _rate_scale(form: QuadraticForm, a: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Size of the products summed in the chain-rule derivative."""
    au = np.abs(u) @ np.abs(a).T
    return 2.0 * np.einsum("...i,ij,...j->...", np.abs(u), np.abs(form.matrix), au)


def check_lemma_inequality(
    lemma_id: FunctionalId | str,
    tr: Trajectory | Sequence[Trajectory],
    p: Parameters,
    cfg: LyapunovConfig,
) -> ResidualReport:
    """Fit the free constant of one inequality over every sample of ``tr``.

    ``fitted_constant`` is the smallest C for which the inequality holds at
    all samples with a nonzero majorant; ``max_violation`` is evaluated at that C.
    """
    trajectories = [tr] if isinstance(tr, Trajectory) else list(tr)
    speeds = classify_speeds(p)
    pieces = []
    for t in trajectories:
        terms = lemma_terms(lemma_id, p, t.kind, t.xi, cfg, speeds)
        u = t.u
        d_f = terms.functional.rate(t.generator.matrix, u)
        coercive = terms.coercive(u)
        explicit = total(terms.explicit, u)
        scale = (
            _rate_scale(terms.functional, t.generator.matrix, u)
            + np.abs(coercive)
            + magnitude(terms.explicit, u)
        )
        pieces.append((d_f + coercive - explicit, terms.majorant(u), scale))

    if not pieces:
        return ResidualReport(str(lemma_id), 0.0, 0.0, 0, 0.0)
    residual, majorant, scale = (np.concatenate(arrays) for arrays in zip(*pieces, strict=True))
    slack = SLACK * scale
    bounded = majorant > MAJORANT_FLOOR * scale
    constant = 0.0
    if np.any(bounded):
        ratios = (residual[bounded] - slack[bounded]) / majorant[bounded]
        constant = max(0.0, float(np.max(ratios))) * (1 + 1e-12)
    violation = float(np.max(residual - constant * majorant - slack))
    logger.debug(
        "%s: C=%.4g violation=%.3e over %d samples", lemma_id, constant, violation, residual.size
    )
    return ResidualReport(
        lemma_id=str(FunctionalId(lemma_id)),
        max_violation=violation,
        fitted_constant=constant,
        n_samples=int(residual.size),
    )
