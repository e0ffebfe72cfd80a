"""Scikit-learn estimator wrapping the placement solver.

The optimization is fit-shaped in the same way k-means is: the fit data
are event sample locations (optionally weighted), fitting places the
sensors, prediction assigns new points to their nearest sensor, and
transformation returns distances to every sensor. The extra ingredient
relative to k-means is the differentiable connectivity constraint on the
fitted positions.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils.validation import (
    _check_sample_weight,
    check_array,
    check_is_fitted,
    check_random_state,
)

from .constraints import ConstraintSpec
from .coverage import UncertaintyFunction
from .domain import Domain, WeightedPoints
from .graph import EdgeWeightParams, algebraic_connectivity
from .regularizers import Regularizer
from .solver import PlacementProblem, SolverParams, run


class ConnectedCoveragePlacement(TransformerMixin, ClusterMixin, BaseEstimator):
    """Place sensors to cover weighted samples under a connectivity constraint.

    Parameters
    ----------
    n_sensors : int, default=5
        Number of sensors to place.
    w, epsilon : float
        Sigmoid edge-weight steepness and communication radius.
    tau : float, default=-1.0
        Connectivity threshold on the reduced-Laplacian determinant;
        negative values disable the constraint's bite while keeping the
        machinery in place.
    delta : float or None, default=None
        Minimum pairwise separation; None leaves separation constraints
        off.
    alpha : float, default=0.0
        Strength of the pull toward the domain centroid.
    domain_lo, domain_hi : array-like or None
        Box corners. None infers the box from the data with a small
        margin.
    omega, beta, eta, kappa, sigma0, sigma_schedule, slack_bound
        Solver controls; see :class:`~conncover.solver.SolverParams`.
    max_iter : int, default=500
        Iteration cap.
    tol : float, default=1e-5
        KKT residual tolerance for early stopping.
    random_state : int, RandomState or None
        Seeds the initial sensor positions.
    init : array-like of shape (n_sensors, d) or None
        Explicit initial positions; None uses the seeded staging-ring
        initializer (see :func:`~conncover.solver.initial_positions`).

    Attributes
    ----------
    positions_ : ndarray of shape (n_sensors, d)
        Fitted sensor positions.
    labels_ : ndarray of shape (n_samples,)
        Nearest-sensor index of each training sample.
    coverage_ : float
        Final coverage cost (lower is better).
    det_m_ : float
        Final reduced-Laplacian determinant.
    connectivity_ : float
        Final algebraic connectivity (diagnostic).
    n_iter_ : int
        Iterations performed.
    termination_ : str
        Why the solver stopped.
    trajectory_ : Trajectory
        Full iterate history.
    """

    def __init__(
        self,
        n_sensors=5,
        *,
        w=20.0,
        epsilon=0.1,
        tau=-1.0,
        delta=None,
        alpha=0.0,
        domain_lo=None,
        domain_hi=None,
        omega=2.0,
        beta=0.5,
        eta=0.01,
        kappa=0.01,
        sigma0=0.5,
        sigma_schedule="harmonic",
        slack_bound=None,
        max_iter=500,
        tol=1e-5,
        random_state=None,
        init=None,
    ):
        self.n_sensors = n_sensors
        self.w = w
        self.epsilon = epsilon
        self.tau = tau
        self.delta = delta
        self.alpha = alpha
        self.domain_lo = domain_lo
        self.domain_hi = domain_hi
        self.omega = omega
        self.beta = beta
        self.eta = eta
        self.kappa = kappa
        self.sigma0 = sigma0
        self.sigma_schedule = sigma_schedule
        self.slack_bound = slack_bound
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state
        self.init = init

    def _domain(self, X):
        if (self.domain_lo is None) != (self.domain_hi is None):
            raise ValueError("set both domain_lo and domain_hi or neither")
        if self.domain_lo is not None:
            return Domain(
                lo=np.asarray(self.domain_lo, dtype=float),
                hi=np.asarray(self.domain_hi, dtype=float),
            )
        lo = X.min(axis=0)
        hi = X.max(axis=0)
        span = hi - lo
        pad = np.where(span > 0, 0.05 * span, 0.5)
        return Domain(lo=lo - pad, hi=hi + pad)

    def fit(self, X, y=None, sample_weight=None):
        """Place the sensors for the weighted samples in ``X``."""
        X = check_array(X, dtype=float)
        if X.shape[0] < 1:
            raise ValueError("at least one sample is required")
        weights = _check_sample_weight(sample_weight, X, dtype=float)
        total = weights.sum()
        if not total > 0:
            raise ValueError("sample weights sum to zero")
        weights = weights / total

        domain = self._domain(X)
        grid = WeightedPoints(points=X, density_values=weights, cell_weight=1.0)
        reg = (
            Regularizer.centroid_quadratic(self.alpha, domain.centroid)
            if self.alpha > 0
            else Regularizer.none()
        )
        problem = PlacementProblem(
            domain=domain,
            grid=grid,
            n_sensors=self.n_sensors,
            edge_params=EdgeWeightParams(w=self.w, epsilon=self.epsilon),
            constraint_spec=ConstraintSpec(
                tau=self.tau,
                delta=self.delta if self.delta is not None else 0.01,
                min_distance_enabled=self.delta is not None,
            ),
            uncertainty=UncertaintyFunction.quadratic(),
            regularizer=reg,
        )
        rs = check_random_state(self.random_state)
        params = SolverParams(
            omega=self.omega,
            beta=self.beta,
            eta=self.eta,
            kappa=self.kappa,
            sigma0=self.sigma0,
            sigma_schedule=self.sigma_schedule,
            max_iters=self.max_iter,
            kkt_tol=self.tol,
            slack_bound=self.slack_bound,
            seed=int(rs.randint(0, 2**31 - 1)),
        )
        x0 = None if self.init is None else np.asarray(self.init, dtype=float)
        trajectory = run(problem, params, x0=x0)

        last = trajectory.records[-1]
        self.n_features_in_ = X.shape[1]
        self.positions_ = trajectory.final_state.x
        self.trajectory_ = trajectory
        self.termination_ = trajectory.termination
        self.n_iter_ = trajectory.final_state.t
        self.coverage_ = last.coverage
        self.det_m_ = last.det_m
        self.connectivity_ = algebraic_connectivity(self.positions_, problem.edge_params)
        self.labels_ = self.predict(X)
        return self

    def predict(self, X):
        """Nearest fitted sensor index for each row of ``X``."""
        check_is_fitted(self, "positions_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}"
            )
        return np.argmin(cdist(X, self.positions_, "sqeuclidean"), axis=1)

    def transform(self, X):
        """Distances from each row of ``X`` to every fitted sensor."""
        check_is_fitted(self, "positions_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}"
            )
        return cdist(X, self.positions_)

    def score(self, X, y=None, sample_weight=None):
        """Negative coverage cost of ``X`` under the fitted positions."""
        check_is_fitted(self, "positions_")
        X = check_array(X, dtype=float)
        weights = _check_sample_weight(sample_weight, X, dtype=float)
        total = weights.sum()
        if not total > 0:
            raise ValueError("sample weights sum to zero")
        dist = np.min(cdist(X, self.positions_), axis=1)
        return -float(np.sum(0.5 * dist**2 * weights / total))
