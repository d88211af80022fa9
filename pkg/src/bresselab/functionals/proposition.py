"""Fitting the Lyapunov constants over a set of modes.

For each sampled frequency the partial functional L1 and the full functional

    L = xi^2 L1 + N (1 + xi^2 + ... + xi^8) E      (equal speeds)
    L = L1 + N' (1 + xi^2) E                         (distinct speeds)

are evaluated on trajectory samples, the generator's eigenvectors and
undamped samples (coupling temperatures zeroed). From these the
sandwich constant M1, the weight N, the decay constant M2 and the resulting
envelope rate beta = M2 / (N + M1) are fitted.
"""

import logging
import math
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from bresselab.envelopes import envelope_for
from bresselab.errors import EigenFailure
from bresselab.functionals.energy import dissipation_form, elastic_form, energy_form
from bresselab.functionals.forms import QuadraticForm
from bresselab.functionals.lyapunov import ladder_forms, lyapunov_weight, partial_lyapunov
from bresselab.models.config import LyapunovConfig, default_lyapunov_config
from bresselab.models.parameters import Parameters, SpeedClass, SystemKind, classify_speeds
from bresselab.models.reports import PropositionReport
from bresselab.models.state import ComplexArray, Generator, Trajectory, slot
from bresselab.spectral.generator import Rows
from bresselab.spectral.propagator import spectral_abscissa

logger = logging.getLogger(__name__)

MAX_TUNING_STEPS = 30
N_UNDAMPED = 16
# Relative slack of the eigenvalue comparison
SPECTRAL_SLACK = 1e-6


@dataclass
class _ModeSamples:
    """Unit-energy samples at one frequency and the forms evaluated on them."""

    xi: float
    generator: Generator
    u: ComplexArray
    undamped: np.ndarray  # True for samples without thermal dissipation

    def forms(
        self, p: Parameters, cfg: LyapunovConfig, speeds: SpeedClass
    ) -> tuple[QuadraticForm, QuadraticForm, QuadraticForm]:
        kind = self.generator.kind
        l1 = partial_lyapunov(ladder_forms(p, kind, self.xi), kind, self.xi, cfg, speeds)
        return l1, energy_form(p, kind, self.xi), _weighted_form(p, kind, self.xi)


def _weighted_form(p: Parameters, kind: SystemKind, xi: float) -> QuadraticForm:
    """Elastic energy plus, for Type III, the xi^2 |theta_i|^2 thermal terms."""
    form = elastic_form(p, kind, xi)
    if kind is SystemKind.TYPE_III:
        r = Rows(p, kind, xi)
        form = form + p.gamma * xi**2 * (
            p.k1 / p.m1 * QuadraticForm.norm_sq(r["theta1"])
            + p.k2 / p.m2 * QuadraticForm.norm_sq(r["theta2"])
        )
    return form


def _coupling_slots(kind: SystemKind) -> tuple[str, str]:
    """Components whose vanishing switches the dissipation off."""
    if kind is SystemKind.TYPE_I:
        return ("theta1", "theta2")
    return ("theta1_t", "theta2_t")


def _sandwich_weight(xi: float, speeds: SpeedClass) -> float:
    if speeds is SpeedClass.EQUAL:
        return 1 + xi**2 + xi**4 + xi**6
    return 1 + xi**2


def _decay_weight(xi: float, speeds: SpeedClass) -> float:
    if speeds is SpeedClass.EQUAL:
        return xi**4
    return xi**4 / (1 + xi**2 + xi**4) ** 2


def _collect(
    trajectories: Sequence[Trajectory],
    p: Parameters,
    rng: np.random.Generator,
) -> list[_ModeSamples]:
    groups: dict[float, list[Trajectory]] = defaultdict(list)
    for tr in trajectories:
        groups[tr.xi].append(tr)
    out = []
    for xi in sorted(groups):
        if xi == 0.0:
            logger.warning("skipping xi=0: the Lyapunov weights vanish there")
            continue
        g = groups[xi][0].generator
        kind = g.kind
        try:
            _, vectors = scipy.linalg.eig(g.matrix)
        except (np.linalg.LinAlgError, ValueError) as e:
            raise EigenFailure(f"eigenvectors did not converge at xi={xi}: {e}") from e
        quiet = rng.standard_normal((N_UNDAMPED, kind.dim)) + 1j * rng.standard_normal(
            (N_UNDAMPED, kind.dim)
        )
        quiet[:, [slot(kind, name) for name in _coupling_slots(kind)]] = 0.0
        u = np.vstack([tr.u for tr in groups[xi]] + [vectors.T, quiet])
        energy = energy_form(p, kind, xi)(u)
        keep = energy > 0
        u = u[keep] / np.sqrt(energy[keep])[:, None]
        undamped = np.zeros(keep.size, dtype=bool)
        undamped[-N_UNDAMPED:] = True
        out.append(_ModeSamples(xi=xi, generator=g, u=u, undamped=undamped[keep]))
    return out


def _tune(
    modes: list[_ModeSamples], p: Parameters, cfg: LyapunovConfig, speeds: SpeedClass
) -> tuple[LyapunovConfig, float]:
    """Shrink eps3 and grow the lambdas until L1 decays on every undamped sample."""
    worst = np.inf
    for step in range(MAX_TUNING_STEPS + 1):
        worst = -np.inf
        for mode in modes:
            l1, _, _ = mode.forms(p, cfg, speeds)
            rates = l1.rate(mode.generator.matrix, mode.u[mode.undamped])
            if rates.size:
                worst = max(worst, float(np.max(rates)))
        if worst < 0 or step == MAX_TUNING_STEPS:
            break
        logger.debug(
            "step %d: undamped rate %.3e >= 0 with eps3=%.3g lambda1=%.3g lambda2=%.3g",
            step,
            worst,
            cfg.eps3,
            cfg.lambda1,
            cfg.lambda2,
        )
        cfg = cfg.with_updates(
            eps3=cfg.eps3 / 2, lambda1=cfg.lambda1 * 8, lambda2=cfg.lambda2 * 2
        )
    if worst >= 0:
        logger.warning("L1 still grows on an undamped sample (rate %.3e)", worst)
    return cfg, worst


def check_proposition(
    trajectories: Sequence[Trajectory],
    p: Parameters,
    cfg: LyapunovConfig | None = None,
    seed: int = 0,
) -> PropositionReport:
    """Fit M1, N, M2, M and beta over every sampled frequency.

    M is the largest constant with dL1/dt + M sigma(xi) W <= N w(xi) (-dE/dt),
    W the elastic energy; M_undamped restricts it to samples without thermal
    dissipation. The result passes when dL/dt <= -beta s(xi) L holds at every
    sample with the global beta and each per-mode beta s(xi) stays below twice
    the spectral decay rate of the mode.
    """
    if not trajectories:
        raise ValueError("no trajectories to check")
    kind = trajectories[0].kind
    if any(tr.kind is not kind for tr in trajectories):
        raise ValueError("trajectories mix system kinds")
    speeds = classify_speeds(p)
    cfg = cfg or default_lyapunov_config(p, kind)
    envelope = envelope_for(speeds)

    modes = _collect(trajectories, p, np.random.default_rng(seed))
    if not modes:
        raise ValueError("no trajectory at a nonzero frequency")
    cfg, undamped_rate = _tune(modes, p, cfg, speeds)

    # Sandwich constant and the smallest N compensating thermal growth of L1
    evaluated = []
    m1 = 0.0
    n_min = 0.0
    for mode in modes:
        l1, energy, weighted = mode.forms(p, cfg, speeds)
        a = mode.generator.matrix
        outer, poly = lyapunov_weight(mode.xi, speeds)
        values = {
            "l1": l1(mode.u),
            "dl1": l1.rate(a, mode.u),
            "e": energy(mode.u),
            "de": dissipation_form(p, kind, mode.xi)(mode.u),
            "w": weighted(mode.u),
        }
        sandwich = _sandwich_weight(mode.xi, speeds) * values["e"]
        m1 = max(m1, float(np.max(np.abs(outer * values["l1"]) / sandwich)))
        dissipating = values["de"] < 0
        if np.any(dissipating):
            ratios = outer * values["dl1"][dissipating] / (poly * -values["de"][dissipating])
            n_min = max(n_min, float(np.max(ratios)))
        evaluated.append((mode, outer, poly, values))

    n = 2.0 * max(m1, n_min, 1e-12)
    cfg = cfg.with_updates(**({"N": n} if speeds is SpeedClass.EQUAL else {"Nprime": n}))

    beta_local, m2_local, m_local, m_undamped, spectral = [], [], [], [], []
    for mode, outer, poly, v in evaluated:
        sigma = _decay_weight(mode.xi, speeds)
        # dL1/dt + M sigma W <= N poly (-dE/dt): thermal dissipation on the right
        rhs = n * poly * -v["de"]
        coercive = v["w"] > 0
        margin = (rhs - outer * v["dl1"])[coercive] / (sigma * v["w"][coercive])
        m_local.append(float(np.min(margin)))
        quiet = mode.undamped[coercive]
        if np.any(quiet):
            m_undamped.append(float(np.min(margin[quiet])))
        d_lyap = outer * v["dl1"] - rhs
        m2_xi = float(np.min(-d_lyap / (sigma * v["e"])))
        b_xi = m2_xi / (n + m1)
        spectral_rate = 2 * abs(spectral_abscissa(mode.generator))
        spectral.append(b_xi * float(envelope(mode.xi)) <= spectral_rate * (1 + SPECTRAL_SLACK))
        m2_local.append(m2_xi)
        beta_local.append(b_xi)

    m2 = min(m2_local)
    beta = m2 / (n + m1)
    # Gronwall step with the global constants: dL/dt <= -beta s L on every sample
    violations = []
    for mode, outer, poly, v in evaluated:
        lyap = outer * v["l1"] + n * poly * v["e"]
        d_lyap = outer * v["dl1"] + n * poly * v["de"]
        decay = beta * float(envelope(mode.xi)) * lyap
        slack = 1e-9 * (np.abs(d_lyap) + np.abs(decay))
        violations.append(float(np.max(d_lyap + decay - slack)))
    violation = max(violations)
    if undamped_rate >= 0:
        violation = max(violation, undamped_rate)
    report = PropositionReport(
        lemma_id="proposition",
        max_violation=violation,
        fitted_constant=n,
        n_samples=int(sum(mode.u.shape[0] for mode in modes)),
        kind=kind,
        speeds=speeds,
        config=cfg,
        M=min(m_local),
        M_undamped=min(m_undamped, default=math.nan),
        M1=m1,
        M2=m2,
        beta=beta,
        envelope_constant=(n + m1) / (n - m1),
        xis=np.array([mode.xi for mode in modes]),
        beta_local=np.array(beta_local),
        spectral_ok=all(spectral),
    )
    logger.info(
        "%s %s: M=%.4g M1=%.4g M2=%.4g N=%.4g beta=%.4g",
        kind.label,
        speeds,
        report.M,
        m1,
        m2,
        n,
        beta,
    )
    return report
