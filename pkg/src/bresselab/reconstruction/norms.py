"""Sobolev norms of the solution by quadrature over frequency.

With f_hat(xi) = integral f(x) exp(-i xi x) dx and even mode energies,

    ||d^k V(t)||_2^2 = (1 / pi) integral_0^inf xi^(2k) E(xi, t) dxi.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np

from bresselab.errors import TailTooFat
from bresselab.models.config import ExperimentConfig
from bresselab.models.grid import FloatArray, FrequencyGrid, band_grid, default_grid
from bresselab.models.parameters import Parameters, SystemKind
from bresselab.models.reports import NormReport
from bresselab.models.state import layout
from bresselab.parallel import map_modes
from bresselab.reconstruction.profiles import InitialProfile, ProfileKind, initial_states
from bresselab.reconstruction.vector import derivative_split, vector_rows
from bresselab.spectral.generator import build_generator
from bresselab.spectral.propagator import Propagator

logger = logging.getLogger(__name__)

# Largest admissible tail beyond the grid, relative to the integral on it
TAIL_FRACTION = 1e-6
# Panels of the geometric tail grid and how far past xi_max it reaches
TAIL_PANELS = 256
TAIL_REACH = 1e4
# Relative growth between samples that marks a transient
TRANSIENT_SLACK = 1e-9
SPLIT_AT = 1.0


def profile_grid(profile: InitialProfile, cfg: ExperimentConfig) -> FrequencyGrid:
    """Band data gets panels on the band only; everything else the default grid."""
    if profile.kind is ProfileKind.BAND:
        lo, hi = profile.band
        return band_grid(lo, hi, cfg.n_linear)
    return default_grid(cfg.xi_min, cfg.xi_max, cfg.n_geometric, cfg.n_linear)


def initial_energies(
    p: Parameters, kind: SystemKind, profile: InitialProfile, xis: FloatArray
) -> FloatArray:
    """Mode energies of the initial data at every xi, without propagation."""
    xis = np.asarray(xis, dtype=float)
    u = initial_states(profile, kind, xis)
    r0, r1 = derivative_split(p, kind)
    v = u @ r0.T + 1j * xis[:, None] * (u @ r1.T)
    return np.asarray(np.sum(np.abs(v) ** 2, axis=-1), dtype=float)


def energy_table(
    p: Parameters,
    kind: SystemKind,
    profile: InitialProfile,
    grid: FrequencyGrid,
    times: FloatArray,
    threads: int = 1,
) -> FloatArray:
    """E(xi, t) for every grid node and time, shape (len(times), len(grid))."""
    times = np.asarray(times, dtype=float)
    u0 = initial_states(profile, kind, grid.nodes)

    def mode(i: int) -> FloatArray:
        if not np.any(u0[i]):
            return np.zeros(times.size)
        xi = float(grid.nodes[i])
        states = Propagator(build_generator(p, kind, xi)).states(u0[i], times)[:, 0, :]
        v = states @ vector_rows(p, kind, xi).T
        return np.asarray(np.sum(np.abs(v) ** 2, axis=-1), dtype=float)

    columns = map_modes(mode, range(len(grid)), threads)
    return np.stack(columns, axis=1) if columns else np.zeros((times.size, 0))


def check_tail(
    p: Parameters,
    kind: SystemKind,
    profile: InitialProfile,
    order: int,
    grid: FrequencyGrid,
) -> float:
    """Initial xi^(2 order) E integral beyond the grid relative to the one on it.

    Mode energies never exceed their initial value times the envelope
    constant, so the initial tail bounds the tail at every time.
    """
    xi_max = grid.span[1]
    if profile.support_max() <= xi_max:
        return 0.0
    tail_grid = FrequencyGrid.from_endpoints(
        np.geomspace(xi_max, TAIL_REACH * xi_max, TAIL_PANELS + 1)
    )
    tail = tail_grid.integrate(
        tail_grid.nodes ** (2 * order) * initial_energies(p, kind, profile, tail_grid.nodes)
    )
    head = grid.integrate(
        grid.nodes ** (2 * order) * initial_energies(p, kind, profile, grid.nodes)
    )
    if tail == 0.0:
        return 0.0
    ratio = tail / head if head > 0 else math.inf
    if ratio > TAIL_FRACTION:
        raise TailTooFat(
            f"spectral tail beyond xi={xi_max:g} is {ratio:.2e} of the integral "
            f"at derivative order {order}; extend the grid"
        )
    return ratio


def _split_integrals(grid: FrequencyGrid, values: FloatArray) -> tuple[FloatArray, FloatArray]:
    """Integrals of ``values`` (last axis on the nodes) below and above SPLIT_AT."""
    low, high = grid.split(SPLIT_AT)
    n_low = len(low)
    zeros = np.zeros(values.shape[:-1])
    low_part = values[..., :n_low] @ low.weights if n_low else zeros
    high_part = values[..., max(n_low - 1, 0) :] @ high.weights if len(high) else zeros
    return low_part, high_part


def _slot_mask(profile: InitialProfile, kind: SystemKind) -> np.ndarray:
    names = layout(kind)
    mask = np.zeros(kind.dim, dtype=bool)
    for name in profile.slots:
        mask[names.index(name)] = True
    return mask


def l1_bound(p: Parameters, kind: SystemKind, profile: InitialProfile) -> float | None:
    """Upper bound on ||V^0||_1, or None when the profile is not integrable.

    Each component of V^0 is a f + b f' for the profile f, so the sum of
    |a| ||f||_1 + |b| ||f'||_1 over components bounds the norm.
    """
    profile.check(kind)
    r0, r1 = derivative_split(p, kind)
    e = _slot_mask(profile, kind)
    a = np.abs(r0[:, e]).sum()
    b = np.abs(r1[:, e]).sum()
    total = 0.0
    for weight, n in ((a, 0), (b, 1)):
        if weight == 0:
            continue
        norm = profile.derivative_l1(n)
        if norm is None:
            return None
        total += float(weight) * norm
    return total


def hs_norm(
    p: Parameters, kind: SystemKind, profile: InitialProfile, order: int, grid: FrequencyGrid
) -> float:
    """||d^order V^0||_2 from the initial energies."""
    check_tail(p, kind, profile, order, grid)
    values = grid.nodes ** (2 * order) * initial_energies(p, kind, profile, grid.nodes)
    return math.sqrt(max(grid.integrate(values), 0.0) / math.pi)


def norm_report(
    p: Parameters,
    kind: SystemKind,
    profile: InitialProfile,
    k: int,
    times: FloatArray,
    grid: FrequencyGrid,
    l_orders: Sequence[int] = (),
    threads: int = 1,
) -> NormReport:
    """||d^k V(t)||_2 at ``times`` with its low/high-frequency parts."""
    if k < 0 or any(order < 0 for order in l_orders):
        raise ValueError("derivative orders must be nonnegative")
    profile.check(kind)
    check_tail(p, kind, profile, k, grid)
    times = np.asarray(times, dtype=float)
    logger.info("norms of order %d at %d times over %d nodes", k, times.size, len(grid))

    weighted = energy_table(p, kind, profile, grid, times, threads) * grid.nodes ** (2 * k)
    full = weighted @ grid.weights
    low, high = _split_integrals(grid, weighted)
    norms = np.sqrt(np.maximum(full, 0.0) / math.pi)
    transient = np.zeros(times.size, dtype=bool)
    transient[1:] = norms[1:] > norms[:-1] * (1 + TRANSIENT_SLACK)
    if np.any(transient):
        logger.debug("norm grew at %d of %d samples", int(transient.sum()), times.size)
    return NormReport(
        times=times,
        k=k,
        norms=norms,
        norms_low=np.sqrt(np.maximum(low, 0.0) / math.pi),
        norms_high=np.sqrt(np.maximum(high, 0.0) / math.pi),
        l1_init=l1_bound(p, kind, profile),
        hs_init={order: hs_norm(p, kind, profile, k + order, grid) for order in l_orders},
        transient=transient,
    )


def sobolev_norm(
    p: Parameters,
    kind: SystemKind,
    profile: InitialProfile,
    k: int,
    t: float,
    grid: FrequencyGrid,
    threads: int = 1,
) -> float:
    """||d^k V(t)||_2 for initial data ``profile``."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    report = norm_report(p, kind, profile, k, np.array([t]), grid, threads=threads)
    return float(report.norms[0])
