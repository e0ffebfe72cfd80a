"""Expected-coverage objective over a quadrature grid.

Coverage cost is the density-weighted quadrature sum of a radially
increasing uncertainty function evaluated at each node's distance to its
nearest sensor. Lower is better. The gradient treats the induced nearest-
sensor partition as fixed, which is exact for the discretized objective
away from ownership switches.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.spatial.distance import cdist

from .domain import COINCIDENT_TOL, check_positions
from .errors import SingularConfigurationError

# Radius floor for the h(r) = f'(r)/r limit branch.
_H_LIMIT_RADIUS = 1e-12


@dataclass(frozen=True)
class UncertaintyFunction:
    """Sensing uncertainty as a function of distance.

    ``f`` must be smooth, increasing, and flat at zero; its derivative
    enters the gradient through h(r) = f'(r)/r, which the quadratic case
    fixes at exactly one.
    """

    kind: str
    f: Callable
    f_prime: Callable

    @staticmethod
    def quadratic():
        return UncertaintyFunction(
            kind="quadratic",
            f=lambda r: 0.5 * np.square(r),
            f_prime=lambda r: np.asarray(r, dtype=float),
        )

    @staticmethod
    def custom(f, f_prime):
        return UncertaintyFunction(kind="custom", f=f, f_prime=f_prime)

    def h(self, r):
        """f'(r)/r with a guarded limit branch near r = 0."""
        r = np.asarray(r, dtype=float)
        if self.kind == "quadratic":
            return np.ones_like(r)
        safe = np.maximum(r, _H_LIMIT_RADIUS)
        return self.f_prime(safe) / safe


@dataclass(frozen=True)
class CoverageEvaluation:
    """Coverage cost, its position gradient, and the node ownership map."""

    value: float
    gradient: np.ndarray
    ownership: np.ndarray


def assign_voronoi(grid, x):
    """Index of the nearest sensor for each grid node.

    Ties break toward the lower sensor index, so the assignment is
    deterministic.
    """
    x = check_positions(x, dim=grid.points.shape[1])
    d2 = cdist(grid.points, x, "sqeuclidean")
    return np.argmin(d2, axis=1)


def _owner_distances(grid, x):
    labels = assign_voronoi(grid, x)
    diff = grid.points - x[labels]
    return labels, np.linalg.norm(diff, axis=1)


def coverage_value(x, grid, uncertainty=None):
    """Density-weighted quadrature sum of f(distance to nearest sensor)."""
    x = check_positions(x, dim=grid.points.shape[1])
    uncertainty = uncertainty or UncertaintyFunction.quadratic()
    _, dist = _owner_distances(grid, x)
    return float(np.sum(uncertainty.f(dist) * grid.masses))


def _check_distinct(x):
    if x.shape[0] >= 2:
        pair = cdist(x, x)
        np.fill_diagonal(pair, np.inf)
        if pair.min() < COINCIDENT_TOL:
            raise SingularConfigurationError(
                "two sensors coincide; the coverage gradient is undefined"
            )


def coverage_gradient(x, grid, uncertainty=None):
    """Gradient of :func:`coverage_value` at fixed ownership.

    For each sensor the contribution is the owned-mass-weighted sum of
    h(r) * (x_i - q); with quadratic uncertainty this is the owned mass
    times the offset from the owned mass centroid, so the gradient
    vanishes exactly at a centroidal configuration.
    """
    return coverage_eval(x, grid, uncertainty).gradient


def coverage_eval(x, grid, uncertainty=None):
    """Value, gradient, and ownership in one pass over the grid."""
    x = check_positions(x, dim=grid.points.shape[1])
    uncertainty = uncertainty or UncertaintyFunction.quadratic()
    _check_distinct(x)
    n, d = x.shape
    labels, dist = _owner_distances(grid, x)
    masses = grid.masses
    value = float(np.sum(uncertainty.f(dist) * masses))
    wp = masses * uncertainty.h(dist)
    sum_w = np.bincount(labels, weights=wp, minlength=n)
    sum_wq = np.stack(
        [
            np.bincount(labels, weights=wp * grid.points[:, k], minlength=n)
            for k in range(d)
        ],
        axis=1,
    )
    grad = x * sum_w[:, None] - sum_wq
    return CoverageEvaluation(value=value, gradient=grad, ownership=labels)
