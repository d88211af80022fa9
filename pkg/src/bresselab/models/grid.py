"""Frequency grids and their quadrature weights."""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

FloatArray = NDArray[np.float64]

DEFAULT_XI_MIN = 1e-3
DEFAULT_XI_MAX = 1e2
DEFAULT_GEOMETRIC_NODES = 2048
DEFAULT_LINEAR_PANELS = 256


def _simpson_layout(endpoints: FloatArray) -> tuple[FloatArray, FloatArray]:
    """Nodes and weights of composite Simpson over the panels between ``endpoints``.

    Every panel carries its own midpoint, so the rule is exact for cubics even on
    non-uniform panel layouts.
    """
    if endpoints.size < 2:
        raise ValueError("a frequency grid needs at least two panel endpoints")
    left, right = endpoints[:-1], endpoints[1:]
    width = right - left
    nodes = np.empty(2 * endpoints.size - 1)
    nodes[0::2] = endpoints
    nodes[1::2] = 0.5 * (left + right)
    weights = np.zeros_like(nodes)
    weights[0:-1:2] += width / 6.0
    weights[1::2] += 4.0 * width / 6.0
    weights[2::2] += width / 6.0
    return nodes, weights


def _dedupe(points: FloatArray) -> FloatArray:
    points = np.unique(points)
    keep = np.ones(points.size, dtype=bool)
    keep[1:] = np.diff(points) > 1e-12 * np.maximum(1.0, points[1:])
    return points[keep]


@dataclass(frozen=True)
class FrequencyGrid:
    """Nonnegative frequency nodes with weights for the integral over [0, inf).

    Nodes are grouped in Simpson panels (endpoint, midpoint, endpoint); the panel
    endpoints are the even-indexed nodes.
    """

    nodes: FloatArray
    weights: FloatArray

    def __post_init__(self) -> None:
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")
        if self.nodes.size and not np.all(np.isfinite(self.nodes)):
            raise ValueError("grid nodes must be finite")
        if self.nodes.size > 1 and not np.all(np.diff(self.nodes) > 0):
            raise ValueError("grid nodes must be strictly increasing")
        if self.nodes.size and (self.nodes[0] < 0 or not np.all(self.weights > 0)):
            raise ValueError("grid nodes must be nonnegative with positive weights")

    @classmethod
    def from_endpoints(cls, endpoints: FloatArray) -> "FrequencyGrid":
        nodes, weights = _simpson_layout(_dedupe(np.asarray(endpoints, dtype=float)))
        return cls(nodes=nodes, weights=weights)

    @classmethod
    def empty(cls) -> "FrequencyGrid":
        return cls(nodes=np.empty(0), weights=np.empty(0))

    @property
    def endpoints(self) -> FloatArray:
        return self.nodes[0::2]

    @property
    def span(self) -> tuple[float, float]:
        return float(self.nodes[0]), float(self.nodes[-1])

    def __len__(self) -> int:
        return int(self.nodes.size)

    def integrate(self, values: FloatArray) -> float:
        """Quadrature of sampled ``values`` over the grid span."""
        return float(np.dot(self.weights, values))

    def refined(self) -> "FrequencyGrid":
        """Grid with every panel split in two (twice the nodes, same span)."""
        return FrequencyGrid.from_endpoints(self.nodes)

    def split(self, at: float) -> tuple["FrequencyGrid", "FrequencyGrid"]:
        """Grids below and above ``at``; ``at`` must be a panel endpoint or outside the span."""
        ends = self.endpoints
        if at <= ends[0]:
            return FrequencyGrid.empty(), self
        if at >= ends[-1]:
            return self, FrequencyGrid.empty()
        idx = int(np.searchsorted(ends, at))
        if not np.isclose(ends[idx], at, rtol=1e-12, atol=0.0):
            raise ValueError(f"{at} is not a panel endpoint of the grid")
        return (
            FrequencyGrid.from_endpoints(ends[: idx + 1]),
            FrequencyGrid.from_endpoints(ends[idx:]),
        )


def default_grid(
    xi_min: float = DEFAULT_XI_MIN,
    xi_max: float = DEFAULT_XI_MAX,
    n_geometric: int = DEFAULT_GEOMETRIC_NODES,
    n_linear: int = DEFAULT_LINEAR_PANELS,
) -> FrequencyGrid:
    """Geometric panels on [xi_min, xi_max] merged with a linear refinement of [0, 1]."""
    geometric = np.geomspace(xi_min, xi_max, n_geometric)
    linear = np.linspace(0.0, 1.0, n_linear + 1)
    return FrequencyGrid.from_endpoints(np.concatenate([linear, geometric]))


def band_grid(xi_lo: float, xi_hi: float, n_panels: int = 256) -> FrequencyGrid:
    """Uniform panels covering exactly [xi_lo, xi_hi]."""
    if not 0 <= xi_lo < xi_hi:
        raise ValueError("band grid needs 0 <= xi_lo < xi_hi")
    return FrequencyGrid.from_endpoints(np.linspace(xi_lo, xi_hi, n_panels + 1))
