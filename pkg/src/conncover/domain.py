"""Deployment domain, event densities, and quadrature grids.

The deployment region is an axis-aligned box. Event likelihood is modelled
as a Gaussian mixture normalized so that its midpoint-rule quadrature sum
over the box equals one; a uniform density is the special case of a single
component whose width is much larger than the box.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateDensityError

# Distances below this are treated as coincident points.
COINCIDENT_TOL = 1e-12


def check_positions(x, dim=None):
    """Coerce ``x`` to an (n, d) float array and validate it.

    Parameters
    ----------
    x : array-like
        Sensor positions, one row per sensor.
    dim : int, optional
        Required spatial dimension. When given, a mismatch raises.

    Returns
    -------
    ndarray of shape (n, d)

    Raises
    ------
    ValueError
        If the array is not two-dimensional, is empty, contains
        non-finite entries, or has the wrong spatial dimension.
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(
            f"positions must be a non-empty (n, d) array, got shape {arr.shape}"
        )
    if dim is not None and arr.shape[1] != dim:
        raise ValueError(
            f"positions have spatial dimension {arr.shape[1]}, expected {dim}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError("positions must be finite")
    return arr


@dataclass(frozen=True)
class Domain:
    """Axis-aligned box region.

    Attributes
    ----------
    lo, hi : ndarray of shape (d,)
        Lower and upper corners, with ``hi > lo`` componentwise.
    """

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=float))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=float))
        if lo.ndim != 1 or lo.shape != hi.shape:
            raise ValueError("domain corners must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("domain corners must be finite")
        if not np.all(hi > lo):
            raise ValueError("domain requires hi > lo componentwise")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self):
        return self.lo.shape[0]

    @property
    def volume(self):
        return float(np.prod(self.hi - self.lo))

    @property
    def centroid(self):
        return 0.5 * (self.lo + self.hi)

    @property
    def diameter(self):
        return float(np.linalg.norm(self.hi - self.lo))


def project_to_domain(x, domain):
    """Componentwise projection of positions onto the box.

    Idempotent; points already inside are returned unchanged.
    """
    x = check_positions(x, dim=domain.dim)
    return np.clip(x, domain.lo, domain.hi)


@dataclass(frozen=True)
class GaussianComponent:
    """One isotropic Gaussian bump: relative amplitude ``weight``,
    center ``mean``, width ``sigma``."""

    mean: np.ndarray
    sigma: float
    weight: float = 1.0

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "weight", float(self.weight))
        if not np.all(np.isfinite(mean)):
            raise ValueError("component mean must be finite")
        if not self.sigma > 0:
            raise ValueError(f"component sigma must be positive, got {self.sigma}")
        if not self.weight > 0:
            raise ValueError(f"component weight must be positive, got {self.weight}")


# Width used to realize a uniform density as a single flat Gaussian.
_UNIFORM_SIGMA = 1e6


@dataclass(frozen=True)
class GaussianMixtureDensity:
    """Sum of isotropic Gaussian bumps, scaled by ``gamma``.

    ``gamma`` is the normalizing constant; it starts at 1 and is fixed by
    :func:`attach_density` so the quadrature sum over a grid equals one.
    """

    components: tuple
    gamma: float = 1.0

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("density needs at least one component")
        object.__setattr__(self, "components", comps)

    @classmethod
    def single(cls, mean, sigma, weight=1.0):
        return cls(components=(GaussianComponent(mean, sigma, weight),))

    @classmethod
    def uniform(cls, domain):
        """Effectively constant density over ``domain``.

        A single component centered at the box centroid with width far
        exceeding the box makes the values equal to within roundoff.
        """
        return cls.single(domain.centroid, _UNIFORM_SIGMA)

    def evaluate_unnormalized(self, points):
        """Mixture value (without gamma) at each row of ``points``."""
        pts = np.asarray(points, dtype=float)
        total = np.zeros(pts.shape[0])
        for c in self.components:
            sq = np.sum((pts - c.mean) ** 2, axis=1)
            total += c.weight * np.exp(-sq / (2.0 * c.sigma**2))
        return total

    def __call__(self, points):
        return self.gamma * self.evaluate_unnormalized(points)


@dataclass(frozen=True)
class QuadratureGrid:
    """Midpoint-rule quadrature over a box: ``resolution`` cells per axis,
    one node at each cell center, every cell carrying equal weight.

    Immutable after construction; safe to share between evaluations.

    Attributes
    ----------
    points : ndarray of shape (resolution**d, d)
    cell_weight : float
        Volume of one cell.
    resolution : int
    density_values : ndarray or None
        Normalized density at each node, set by :func:`attach_density`.
    gamma : float or None
        Normalizing constant used for ``density_values``.
    """

    points: np.ndarray
    cell_weight: float
    resolution: int
    density_values: np.ndarray | None = None
    gamma: float | None = None

    @property
    def masses(self):
        """Per-node quadrature mass ``density * cell_weight``; sums to 1."""
        if self.density_values is None:
            raise ValueError("grid has no density attached")
        return self.density_values * self.cell_weight


@dataclass(frozen=True)
class WeightedPoints:
    """Discrete weighted point set quacking like a grid with density
    attached. Used by the estimator interface, where the event density is
    given by samples instead of a mixture."""

    points: np.ndarray
    density_values: np.ndarray
    cell_weight: float = 1.0

    @property
    def masses(self):
        return self.density_values * self.cell_weight


def build_grid(domain, resolution):
    """Uniform cell-centered lattice over the box.

    Raises
    ------
    ValueError
        If ``resolution`` is not an integer of at least 2.
    """
    if int(resolution) != resolution or resolution < 2:
        raise ValueError(f"resolution must be an integer >= 2, got {resolution!r}")
    resolution = int(resolution)
    axes = [
        domain.lo[k]
        + (np.arange(resolution) + 0.5) * (domain.hi[k] - domain.lo[k]) / resolution
        for k in range(domain.dim)
    ]
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=1)
    cell_weight = domain.volume / resolution**domain.dim
    return QuadratureGrid(points=points, cell_weight=cell_weight, resolution=resolution)


def attach_density(grid, density):
    """Normalize ``density`` on ``grid`` and cache its node values.

    Returns a new grid whose ``density_values`` sum (times cell weight) to
    one, together with the ``gamma`` that achieves it. Values that
    underflow to zero are floored at the smallest positive normal float so
    the cached density stays strictly positive.

    Raises
    ------
    DegenerateDensityError
        If the quadrature sum of the unnormalized density is zero or
        non-finite.
    """
    raw = density.evaluate_unnormalized(grid.points)
    raw = np.maximum(raw, np.finfo(float).tiny)
    total = float(raw.sum() * grid.cell_weight)
    if not np.isfinite(total) or total <= np.finfo(float).tiny:
        raise DegenerateDensityError(
            "density integrates to zero (or non-finite) over the domain; "
            "check component means and widths against the box"
        )
    gamma = 1.0 / total
    return replace(grid, density_values=raw * gamma, gamma=gamma)
