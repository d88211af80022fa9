"""The ladder of auxiliary functionals and the Lyapunov functionals built on it.

Every functional is a Hermitian form in the mode state, assembled from the
``Rows`` of the generator. Type III variants replace the coupling temperature
theta_i by theta_i_t and carry the extra corrections the second-order heat
law needs.
"""

from enum import StrEnum

from bresselab.errors import WrongKind
from bresselab.functionals.energy import energy_form
from bresselab.functionals.forms import QuadraticForm
from bresselab.models.config import LyapunovConfig
from bresselab.models.parameters import Parameters, SpeedClass, SystemKind
from bresselab.models.state import ModeState
from bresselab.spectral.generator import Rows


class FunctionalId(StrEnum):
    J1 = "J1"
    T1 = "T1"
    T2 = "T2"
    J2 = "J2"
    J3 = "J3"
    J4 = "J4"
    K = "K"
    H = "H"
    S = "S"  # Type III only
    L1 = "L1"
    L = "L"


def ladder_forms(
    p: Parameters, kind: SystemKind, xi: float
) -> dict[FunctionalId, QuadraticForm]:
    r = Rows(p, kind, xi)
    cross = QuadraticForm.cross
    sq = QuadraticForm.norm_sq
    type3 = kind is SystemKind.TYPE_III

    j1 = cross(1j * p.rho2 * xi, r["psi_t"], r.heat2)
    if type3:
        j1 = j1 + cross(1j * p.k2 * p.rho2 * xi**3, r["psi"], r["theta2"])
    t1 = cross(-p.rho1, r["phi_t"], r.axial) + cross(-p.rho1 / p.m1, r["phi_t"], r.heat1)
    t2 = cross(1j * p.rho1 * xi, r["omega_t"], r.axial) + cross(
        1j * p.rho1 * xi / p.m1, r["omega_t"], r.heat1
    )
    j2 = p.l * t1 + t2
    if type3:
        j2 = j2 + cross(p.rho1 * p.k1 * xi**2 / p.m1, r.axial, r["theta1"])
    j3 = cross(-p.rho2, r["psi_t"], r.shear) + cross(
        -1j * p.rho1 * p.b * xi / p.k, r["psi"], r["phi_t"]
    )
    j4 = cross(p.rho2**2 * p.l**2 / p.rho1, r["psi_t"], r["psi"]) + cross(
        -p.rho2 * p.l, r["omega_t"], r["psi"]
    )
    h = cross(p.rho1, r.shear, r["omega_t"]) + cross(p.rho1, r.axial, r["phi_t"])

    forms = {
        FunctionalId.J1: j1,
        FunctionalId.T1: t1,
        FunctionalId.T2: t2,
        FunctionalId.J2: j2,
        FunctionalId.J3: j3,
        FunctionalId.J4: j4,
        FunctionalId.K: j3 + j4,
        FunctionalId.H: h,
    }
    if type3:
        # |theta_i|^2, not |theta_i_t|^2, in the xi^4 term closes the thermal identity
        forms[FunctionalId.S] = (
            cross(p.gamma * xi**2 / p.m1, r["theta1_t"], r["theta1"])
            + cross(p.gamma * xi**2 / p.m2, r["theta2_t"], r["theta2"])
            + p.gamma
            / 2
            * xi**4
            * (p.alpha1 / p.m1 * sq(r["theta1"]) + p.alpha2 / p.m2 * sq(r["theta2"]))
            + cross(1j * p.gamma * xi**3, r["psi"], r["theta2"])
            + cross(p.gamma * xi**2, r.axial, r["theta1"])
        )
    return forms


def partial_lyapunov(
    ladder: dict[FunctionalId, QuadraticForm],
    kind: SystemKind,
    xi: float,
    cfg: LyapunovConfig,
    speeds: SpeedClass,
) -> QuadraticForm:
    """L1 (Type I) or its Type III counterpart including S."""
    j1, k = ladder[FunctionalId.J1], ladder[FunctionalId.K]
    j2, h = ladder[FunctionalId.J2], ladder[FunctionalId.H]
    s = ladder.get(FunctionalId.S)
    if speeds is SpeedClass.EQUAL:
        form = j1 + cfg.eps2 * xi**2 * k + xi**2 * j2 + cfg.eps3 * xi**2 * h
        return form + s if s is not None else form

    poly = 1 + xi**2 + xi**4
    q = xi**2 / poly
    if s is None:
        inner = q * (cfg.eps3 * cfg.lambda2 * k + j2 + cfg.eps3 * h)
    else:
        inner = (1 / poly) * (
            cfg.eps3 * cfg.lambda2 * xi**2 * k + xi**2 * j2 + cfg.eps3 * xi**2 * h + s
        )
    return q * (cfg.lambda1 * cfg.eps3 * j1 + inner)


def lyapunov_weight(xi: float, speeds: SpeedClass) -> tuple[float, float]:
    """(multiplier of L1, polynomial weight of the energy) in the full functional."""
    if speeds is SpeedClass.EQUAL:
        return xi**2, 1 + xi**2 + xi**4 + xi**6 + xi**8
    return 1.0, 1 + xi**2


def functional_form(
    name: FunctionalId | str,
    p: Parameters,
    kind: SystemKind,
    xi: float,
    cfg: LyapunovConfig,
    speeds: SpeedClass,
) -> QuadraticForm:
    name = FunctionalId(name)
    if name is FunctionalId.S and kind is not SystemKind.TYPE_III:
        raise WrongKind("S is only defined for the Type III system")
    ladder = ladder_forms(p, kind, xi)
    if name in ladder:
        return ladder[name]
    l1 = partial_lyapunov(ladder, kind, xi, cfg, speeds)
    if name is FunctionalId.L1:
        return l1
    outer, poly = lyapunov_weight(xi, speeds)
    n = cfg.N if speeds is SpeedClass.EQUAL else cfg.Nprime
    return outer * l1 + n * poly * energy_form(p, kind, xi)


def eval_functional(
    name: FunctionalId | str,
    s: ModeState,
    p: Parameters,
    cfg: LyapunovConfig,
    speeds: SpeedClass,
) -> float:
    return float(functional_form(name, p, s.kind, s.xi, cfg, speeds)(s.u))
