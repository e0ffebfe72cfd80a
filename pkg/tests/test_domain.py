"""Domain boxes, densities, and quadrature grids."""

import numpy as np
import pytest

from conncover import (
    DegenerateDensityError,
    Domain,
    GaussianComponent,
    GaussianMixtureDensity,
    WeightedPoints,
    attach_density,
    build_grid,
    check_positions,
    project_to_domain,
)

UNIT = Domain(lo=[0.0, 0.0], hi=[1.0, 1.0])


class TestDomain:
    def test_properties(self):
        box = Domain(lo=[0.0, -1.0], hi=[2.0, 3.0])
        assert box.dim == 2
        assert box.volume == pytest.approx(8.0)
        np.testing.assert_allclose(box.centroid, [1.0, 1.0])
        assert box.diameter == pytest.approx(np.hypot(2.0, 4.0))

    def test_rejects_bad_corners(self):
        with pytest.raises(ValueError):
            Domain(lo=[0.0, 0.0], hi=[1.0, 0.0])
        with pytest.raises(ValueError):
            Domain(lo=[0.0], hi=[1.0, 1.0])
        with pytest.raises(ValueError):
            Domain(lo=[0.0, np.nan], hi=[1.0, 1.0])

    def test_projection_clips_and_is_idempotent(self):
        x = np.array([[-0.5, 0.5], [0.2, 1.7], [0.4, 0.6]])
        proj = project_to_domain(x, UNIT)
        np.testing.assert_allclose(proj, [[0.0, 0.5], [0.2, 1.0], [0.4, 0.6]])
        np.testing.assert_array_equal(project_to_domain(proj, UNIT), proj)
        # Interior points come back unchanged.
        np.testing.assert_array_equal(proj[2], x[2])


class TestCheckPositions:
    def test_accepts_lists(self):
        out = check_positions([[0.1, 0.2], [0.3, 0.4]])
        assert out.shape == (2, 2)
        assert out.dtype == float

    def test_rejects_bad_shapes_and_values(self):
        with pytest.raises(ValueError):
            check_positions([0.1, 0.2])
        with pytest.raises(ValueError):
            check_positions(np.zeros((0, 2)))
        with pytest.raises(ValueError):
            check_positions([[0.1, np.inf]])
        with pytest.raises(ValueError):
            check_positions([[0.1, 0.2]], dim=3)


class TestGrid:
    def test_midpoint_lattice(self):
        grid = build_grid(UNIT, 4)
        assert grid.points.shape == (16, 2)
        assert grid.cell_weight == pytest.approx(1.0 / 16)
        # Nodes are cell centers: first axis values 1/8, 3/8, 5/8, 7/8.
        axis = np.unique(grid.points[:, 0])
        np.testing.assert_allclose(axis, [0.125, 0.375, 0.625, 0.875])
        assert grid.points.min() > 0 and grid.points.max() < 1

    def test_rejects_bad_resolution(self):
        for bad in (0, 1, -3, 2.5):
            with pytest.raises(ValueError):
                build_grid(UNIT, bad)

    def test_masses_requires_density(self):
        grid = build_grid(UNIT, 4)
        with pytest.raises(ValueError):
            grid.masses


class TestDensity:
    def test_normalization_sums_to_one(self):
        density = GaussianMixtureDensity.single([0.5, 0.5], 0.2)
        grid = attach_density(build_grid(UNIT, 100), density)
        assert abs(grid.masses.sum() - 1.0) < 1e-12
        assert np.all(grid.density_values > 0)
        assert grid.gamma > 0

    def test_uniform_is_flat(self):
        grid = attach_density(build_grid(UNIT, 50), GaussianMixtureDensity.uniform(UNIT))
        np.testing.assert_allclose(grid.density_values, 1.0, atol=1e-6)
        assert grid.density_values.max() - grid.density_values.min() < 1e-9

    def test_bimodal_symmetry(self):
        density = GaussianMixtureDensity(
            components=(
                GaussianComponent(mean=[0.2, 0.2], sigma=0.2),
                GaussianComponent(mean=[0.8, 0.8], sigma=0.2),
            )
        )
        # Values at the two modes agree by symmetry.
        vals = density.evaluate_unnormalized(np.array([[0.2, 0.2], [0.8, 0.8]]))
        assert vals[0] == pytest.approx(vals[1], rel=1e-12)
        # The midpoint is a saddle: lower than the modes.
        mid = density.evaluate_unnormalized(np.array([[0.5, 0.5]]))[0]
        assert mid < vals[0]

    def test_degenerate_density_raises(self):
        faraway = GaussianMixtureDensity.single([100.0, 100.0], 0.001)
        with pytest.raises(DegenerateDensityError):
            attach_density(build_grid(UNIT, 10), faraway)

    def test_component_validation(self):
        with pytest.raises(ValueError):
            GaussianMixtureDensity.single([0.5, 0.5], -0.1)
        with pytest.raises(ValueError):
            GaussianMixtureDensity.single([0.5, 0.5], 0.1, weight=0.0)
        with pytest.raises(ValueError):
            GaussianMixtureDensity(components=())


class TestWeightedPoints:
    def test_masses(self):
        pts = WeightedPoints(
            points=np.array([[0.0, 0.0], [1.0, 1.0]]),
            density_values=np.array([0.25, 0.75]),
        )
        np.testing.assert_allclose(pts.masses, [0.25, 0.75])
