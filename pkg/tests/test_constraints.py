"""Stacked constraints, Jacobian, and the constraint-qualification check."""

import numpy as np
import pytest
from conftest import fd_gradient, rel_error, spread_positions

from conncover import (
    ConstraintSpec,
    EdgeWeightParams,
    constraint_jacobian,
    eval_constraints,
    grad_det_m,
    mfcq_diagnostic,
    pair_index_list,
    reduced_laplacian,
)

PARAMS = EdgeWeightParams(w=20.0, epsilon=0.1)


class TestSpecValidation:
    def test_delta_required_when_enabled(self):
        with pytest.raises(ValueError):
            ConstraintSpec(tau=0.1, delta=0.0, min_distance_enabled=True)
        ConstraintSpec(tau=0.1, delta=0.0)  # fine while disabled

    def test_constraint_count(self):
        bare = ConstraintSpec(tau=0.1)
        full = ConstraintSpec(tau=0.1, delta=0.05, min_distance_enabled=True)
        assert bare.n_constraints(5) == 1
        assert full.n_constraints(5) == 11
        assert full.n_constraints(1) == 1


class TestEvalConstraints:
    def test_two_sensor_feasible_value(self):
        # At separation epsilon the edge weight is exactly 1/2, so
        # det M = 1 and g = 0.1 - 1 = -0.9.
        x = np.array([[0.0, 0.0], [0.1, 0.0]])
        out = eval_constraints(x, PARAMS, ConstraintSpec(tau=0.1))
        assert out.values.shape == (1,)
        assert out.values[0] == pytest.approx(-0.9, abs=1e-12)
        assert out.active_set.size == 0

    def test_negative_tau_never_active(self):
        rng = np.random.default_rng(20)
        spec = ConstraintSpec(tau=-1.0)
        for _ in range(5):
            x = spread_positions(rng, 4)
            out = eval_constraints(x, PARAMS, spec)
            assert out.values[0] < 0
            assert out.active_set.size == 0

    def test_pair_constraints_stacked_lexicographically(self):
        x = np.array([[0.0, 0.0], [0.3, 0.0], [0.0, 0.4]])
        spec = ConstraintSpec(tau=0.1, delta=0.05, min_distance_enabled=True)
        out = eval_constraints(x, PARAMS, spec)
        assert out.values.shape == (4,)
        d01, d02, d12 = 0.3, 0.4, 0.5
        np.testing.assert_allclose(
            out.values[1:], [0.05 - d01, 0.05 - d02, 0.05 - d12], atol=1e-15
        )
        assert pair_index_list(3) == [(0, 1), (0, 2), (1, 2)]

    def test_active_pair_detected(self):
        x = np.array([[0.0, 0.0], [0.05, 0.0]])
        spec = ConstraintSpec(tau=-1.0, delta=0.05, min_distance_enabled=True)
        out = eval_constraints(x, PARAMS, spec)
        np.testing.assert_array_equal(out.active_set, [1])

    def test_activation_tolerance_scales_with_tau(self):
        x = np.array([[0.0, 0.0], [0.1, 0.0]])  # det M = 1
        spec = ConstraintSpec(tau=1.0 + 3e-6)
        # |g| = 3e-6 exceeds the unscaled 1e-6 but not 1e-6 * max(1, tau).
        out = eval_constraints(x, PARAMS, spec)
        assert out.active_set.size == 0
        wide = eval_constraints(x, PARAMS, spec, activation_tol=1e-5)
        np.testing.assert_array_equal(wide.active_set, [0])

    def test_feasibility_monotone_in_tau(self):
        rng = np.random.default_rng(21)
        x = spread_positions(rng, 4, min_gap=0.05)
        g_small = eval_constraints(x, PARAMS, ConstraintSpec(tau=0.1)).values[0]
        g_large = eval_constraints(x, PARAMS, ConstraintSpec(tau=1.0)).values[0]
        assert g_small < g_large  # feasible for tau2 > tau1 implies feasible for tau1


class TestConstraintJacobian:
    def test_row0_is_negated_det_gradient(self):
        rng = np.random.default_rng(22)
        x = spread_positions(rng, 4)
        jac = constraint_jacobian(x, PARAMS, ConstraintSpec(tau=0.1))
        np.testing.assert_allclose(
            jac[0], -grad_det_m(x, PARAMS).ravel(), atol=1e-14
        )
        # Translation invariance: sensor-block sums vanish.
        np.testing.assert_allclose(jac[0].reshape(4, 2).sum(axis=0), 0.0, atol=1e-10)

    def test_pair_rows_unit_blocks(self):
        x = np.array([[0.0, 0.0], [0.3, 0.0], [0.0, 0.4]])
        spec = ConstraintSpec(tau=0.1, delta=0.05, min_distance_enabled=True)
        jac = constraint_jacobian(x, PARAMS, spec)
        assert jac.shape == (4, 6)
        for row in jac[1:]:
            assert np.linalg.norm(row) == pytest.approx(np.sqrt(2.0), abs=1e-12)
        # Row (0,1): sensors along the x-axis, gradient of 0.05 - d01.
        np.testing.assert_allclose(jac[1], [1, 0, -1, 0, 0, 0], atol=1e-15)

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(23)
        spec = ConstraintSpec(tau=0.1, delta=0.05, min_distance_enabled=True)
        x = spread_positions(rng, 4, min_gap=0.08)
        jac = constraint_jacobian(x, PARAMS, spec)
        for row in range(jac.shape[0]):
            fd = fd_gradient(
                lambda xx, r=row: eval_constraints(xx, PARAMS, spec).values[r], x
            )
            assert rel_error(jac[row], fd.ravel()) < 1e-5


class TestMFCQ:
    def test_vacuous_when_inactive(self):
        x = np.array([[0.0, 0.0], [0.1, 0.0]])
        report = mfcq_diagnostic(x, PARAMS, ConstraintSpec(tau=0.1))
        assert report.vacuous and report.satisfied
        assert report.active_set.size == 0

    def test_certificate_for_active_connectivity(self):
        # Make the connectivity constraint exactly active by choosing
        # tau = det M at the configuration.
        rng = np.random.default_rng(24)
        x = spread_positions(rng, 4, min_gap=0.05, low=0.3, high=0.7)
        det = reduced_laplacian(x, PARAMS).det
        spec = ConstraintSpec(tau=det)
        report = mfcq_diagnostic(x, PARAMS, spec)
        assert not report.vacuous
        assert report.satisfied
        assert report.margin > 0
        jac = constraint_jacobian(x, PARAMS, spec)
        assert np.max(jac[report.active_set] @ report.direction) < 0

    def test_certificate_with_active_pair(self):
        x = np.array([[0.0, 0.0], [0.05, 0.0], [0.5, 0.5]])
        spec = ConstraintSpec(tau=-1.0, delta=0.05, min_distance_enabled=True)
        report = mfcq_diagnostic(x, PARAMS, spec)
        assert report.satisfied
        assert report.margin > 0
        jac = constraint_jacobian(x, PARAMS, spec)
        assert np.max(jac[report.active_set] @ report.direction) < 0

    def test_blended_certificate_connectivity_plus_pair(self):
        # Both the connectivity constraint and one separation pair
        # active at once; the pair avoids the coordinate-extremal sensor.
        x = np.array([[0.0, 0.0], [0.3, 0.3], [0.3, 0.35], [0.6, 0.1]])
        det = reduced_laplacian(x, PARAMS).det
        spec = ConstraintSpec(tau=det, delta=0.05, min_distance_enabled=True)
        report = mfcq_diagnostic(x, PARAMS, spec)
        assert {0} < set(report.active_set.tolist())
        assert report.satisfied and report.margin > 0

    def test_degenerate_single_sensor(self):
        # n=1: det M = 1 by convention and its gradient vanishes, so an
        # exactly-active constraint has no decrease direction.
        x = np.array([[0.5, 0.5]])
        report = mfcq_diagnostic(x, PARAMS, ConstraintSpec(tau=1.0))
        assert not report.satisfied
        assert report.method == "degenerate-gradient"
