"""Proximal-perturbed augmented Lagrangian solver.

Minimizes coverage cost plus regularization over box-constrained sensor
positions subject to the stacked inequality constraints, using bounded
slacks, a perturbation block, and two multiplier vectors. One iteration
performs, in order: a proximal model step in the positions, a projected
slack step (evaluated at the pre-step positions), the tracking-multiplier
update, the main-multiplier update at the new positions, and the closed-
form perturbation update. The penalty parameter is determined by the
proximal weights as rho = omega / (1 + omega * beta).

Two invariants hold exactly after every iteration by construction and are
asserted in the test-suite: lambda - mu = rho * (g + u) and
z = (lambda - mu) / omega.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constraints import constraint_jacobian, eval_constraints
from .coverage import UncertaintyFunction, coverage_eval
from .domain import Domain, QuadratureGrid, check_positions, project_to_domain
from .errors import SingularConfigurationError
from .regularizers import Regularizer, model_minimize, reg_gradient, reg_value

TERMINATION_KKT = "kkt_tol_reached"
TERMINATION_MAX_ITERS = "max_iters"
TERMINATION_NUMERICAL = "numerical_failure"


@dataclass(frozen=True)
class PlacementProblem:
    """Everything the solver needs: region, quadrature, graph profile,
    constraints, uncertainty model, and regularizer."""

    domain: Domain
    grid: QuadratureGrid
    n_sensors: int
    edge_params: object
    constraint_spec: object
    uncertainty: UncertaintyFunction = field(
        default_factory=UncertaintyFunction.quadratic
    )
    regularizer: Regularizer = field(default_factory=Regularizer.none)

    def __post_init__(self):
        if self.grid.density_values is None:
            raise ValueError("problem grid must have a density attached")
        if int(self.n_sensors) != self.n_sensors or self.n_sensors < 1:
            raise ValueError(f"n_sensors must be a positive integer, got {self.n_sensors}")
        object.__setattr__(self, "n_sensors", int(self.n_sensors))


@dataclass(frozen=True)
class SolverParams:
    """Step sizes, proximal weights, schedules, and stopping controls.

    The penalty rho is derived, not set: rho = omega / (1 + omega*beta).
    ``sigma_schedule`` selects how the tracking-multiplier step sigma(t)
    evolves: "harmonic" uses sigma0 / (t + 1), "constant" uses sigma0
    throughout. ``slack_bound`` of None means a problem-dependent default
    is derived at run time.
    """

    omega: float = 2.0
    beta: float = 0.5
    eta: float = 1e-2
    kappa: float = 1e-2
    sigma0: float = 0.5
    sigma_schedule: str = "harmonic"
    max_iters: int = 5000
    kkt_tol: float = 1e-5
    slack_bound: float | None = None
    seed: int = 0

    def __post_init__(self):
        if not self.omega > 1:
            raise ValueError(f"omega must exceed 1, got {self.omega}")
        if not 0 < self.beta < 1:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if not self.sigma0 > 0:
            raise ValueError(f"sigma0 must be positive, got {self.sigma0}")
        if self.sigma_schedule not in ("harmonic", "constant"):
            raise ValueError(
                f"sigma_schedule must be 'harmonic' or 'constant', got {self.sigma_schedule!r}"
            )
        if int(self.max_iters) != self.max_iters or self.max_iters < 0:
            raise ValueError(f"max_iters must be a nonnegative integer, got {self.max_iters}")
        if not self.kkt_tol >= 0:
            raise ValueError(f"kkt_tol must be nonnegative, got {self.kkt_tol}")
        if self.slack_bound is not None and not self.slack_bound > 0:
            raise ValueError(f"slack_bound must be positive, got {self.slack_bound}")

    @property
    def rho(self):
        return self.omega / (1.0 + self.omega * self.beta)

    def sigma(self, t):
        if self.sigma_schedule == "constant":
            return self.sigma0
        return self.sigma0 / (t + 1.0)


@dataclass
class SolverState:
    """Positions, bounded slack, perturbation, and the two multipliers."""

    x: np.ndarray
    u: np.ndarray
    z: np.ndarray
    lam: np.ndarray
    mu: np.ndarray
    t: int = 0


@dataclass(frozen=True)
class IterateRecord:
    """Per-iteration trajectory entry; every field is finite."""

    t: int
    x: np.ndarray
    coverage: float
    reg: float
    det_m: float
    max_violation: float
    slack_gap: float
    stationarity: float
    lambda_norm: float
    mu_norm: float


@dataclass
class Trajectory:
    """Full iterate history plus the final raw state."""

    records: list
    final_state: SolverState
    termination: str
    params: SolverParams


@dataclass(frozen=True)
class KKTResidual:
    """First-order optimality residuals at a point-multiplier pair."""

    stationarity: float
    feasibility: float
    complementarity: float
    dual_negativity: float

    @property
    def overall(self):
        return max(
            self.stationarity,
            self.feasibility,
            self.complementarity,
            self.dual_negativity,
        )


@dataclass(frozen=True)
class _Eval:
    """Cache of per-position quantities shared by a step and its record."""

    cov: object
    values: np.ndarray
    jac: np.ndarray


def _evaluate(x, problem):
    cov = coverage_eval(x, problem.grid, problem.uncertainty)
    cons = eval_constraints(x, problem.edge_params, problem.constraint_spec)
    jac = constraint_jacobian(x, problem.edge_params, problem.constraint_spec)
    return _Eval(cov=cov, values=cons.values, jac=jac)


def default_slack_bound(problem):
    """Box bound for the slack variables.

    Large enough that every slack can absorb its constraint's magnitude:
    a Hadamard-type bound on the reduced determinant (entries of M are at
    most twice the maximum degree) plus the threshold, plus the largest
    possible separation slack when pair constraints are on.
    """
    n = problem.n_sensors
    spec = problem.constraint_spec
    det_bound = (2.0 * (n - 1) ** 2) ** ((n - 1) / 2.0) if n >= 2 else 1.0
    bound = det_bound + abs(spec.tau)
    if spec.min_distance_enabled and n >= 2:
        bound += spec.delta + problem.domain.diameter
    return float(bound)


def ppal_value(state, problem, params):
    """Value of the perturbed augmented Lagrangian (without regularizer)."""
    ev = _evaluate(state.x, problem)
    gu = ev.values + state.u
    dlm = state.lam - state.mu
    return float(
        ev.cov.value
        + state.lam @ (gu - state.z)
        + state.mu @ state.z
        + 0.5 * params.omega * (state.z @ state.z)
        - 0.5 * params.beta * (dlm @ dlm)
        + 0.5 * params.rho * (gu @ gu)
    )


def grad_x_ppal(state, problem, params):
    """Position gradient of the perturbed augmented Lagrangian.

    Equals the coverage gradient plus the constraint Jacobian applied to
    the effective multiplier lambda + rho * (g + u). The regularizer is
    excluded; the model step treats it in closed form.
    """
    ev = _evaluate(state.x, problem)
    mult = state.lam + params.rho * (ev.values + state.u)
    return ev.cov.gradient + (ev.jac.T @ mult).reshape(state.x.shape)


def _stationarity(x, lam, ev, problem):
    total = (
        ev.cov.gradient
        + reg_gradient(x, problem.regularizer)
        + (ev.jac.T @ lam).reshape(x.shape)
    )
    if not np.all(np.isfinite(total)):
        return float("inf")
    moved = project_to_domain(x - total, problem.domain)
    return float(np.linalg.norm(x - moved))


def kkt_residual(x, lam, problem):
    """Residuals of the first-order conditions at ``(x, lam)``.

    Stationarity is the norm of a unit-step projected-gradient residual,
    feasibility the worst violation, complementarity the worst
    |lambda_i * g_i|, and dual negativity the worst negative multiplier.
    """
    x = check_positions(x, dim=problem.domain.dim)
    lam = np.asarray(lam, dtype=float)
    ev = _evaluate(x, problem)
    return KKTResidual(
        stationarity=_stationarity(x, lam, ev, problem),
        feasibility=float(max(np.max(ev.values), 0.0)),
        complementarity=float(np.max(np.abs(lam * ev.values))),
        dual_negativity=float(max(np.max(-lam), 0.0)),
    )


def _make_record(state, ev, problem):
    det = problem.constraint_spec.tau - ev.values[0]
    return IterateRecord(
        t=state.t,
        x=state.x.copy(),
        coverage=ev.cov.value,
        reg=reg_value(state.x, problem.regularizer),
        det_m=float(det),
        max_violation=float(max(np.max(ev.values), 0.0)),
        slack_gap=float(np.linalg.norm(ev.values + state.u)),
        stationarity=_stationarity(state.x, state.lam, ev, problem),
        lambda_norm=float(np.linalg.norm(state.lam)),
        mu_norm=float(np.linalg.norm(state.mu)),
    )


def _step_core(state, ev, problem, params, eta, kappa, slack_bound):
    """One full iteration; returns the new state and its evaluation."""
    mult = state.lam + params.rho * (ev.values + state.u)
    grad = ev.cov.gradient + (ev.jac.T @ mult).reshape(state.x.shape)
    x_next = model_minimize(state.x, grad, eta, problem.regularizer, problem.domain)
    # Slack step uses the pre-step positions via the cached values.
    u_next = np.clip(state.u - kappa * mult, 0.0, slack_bound)
    mu_next = state.mu + params.sigma(state.t) * (state.lam - state.mu)
    ev_next = _evaluate(x_next, problem)
    lam_next = mu_next + params.rho * (ev_next.values + u_next)
    z_next = (lam_next - mu_next) / params.omega
    new_state = SolverState(
        x=x_next, u=u_next, z=z_next, lam=lam_next, mu=mu_next, t=state.t + 1
    )
    return new_state, ev_next


def _state_finite(state, record):
    arrays = (state.x, state.u, state.z, state.lam, state.mu)
    if not all(np.all(np.isfinite(a)) for a in arrays):
        return False
    scalars = (
        record.coverage,
        record.reg,
        record.det_m,
        record.max_violation,
        record.slack_gap,
        record.stationarity,
        record.lambda_norm,
        record.mu_norm,
    )
    return all(np.isfinite(s) for s in scalars)


def step(state, problem, params, slack_bound=None):
    """Advance one iteration from ``state``; returns (state, record)."""
    bound = default_slack_bound(problem) if slack_bound is None else slack_bound
    ev = _evaluate(state.x, problem)
    new_state, new_ev = _step_core(state, ev, problem, params, params.eta, params.kappa, bound)
    return new_state, _make_record(new_state, new_ev, problem)


def _ring_positions(center, radius, angles, radial_factors, dim):
    n = len(angles)
    x = np.tile(center, (n, 1))
    if dim == 1:
        offsets = np.linspace(-1.0, 1.0, n) if n > 1 else np.zeros(1)
        x[:, 0] += radius * offsets * radial_factors
    else:
        r = radius * radial_factors
        x[:, 0] += r * np.cos(angles)
        x[:, 1] += r * np.sin(angles)
    return x


def initial_positions(problem, params):
    """Seeded staging ring around the domain centroid, sized to start
    feasible.

    Sensors begin on a jittered ring whose radius is the largest (found
    by bisection; the determinant is monotone in the ring scale) that
    keeps the connectivity constraint satisfied with margin. Starting
    inside the feasible region lets the constraint activate smoothly as
    coverage spreads the network; a box-scattered start instead leaves
    the determinant so many orders of magnitude below threshold that the
    first-order updates cannot recover it within a practical budget.
    """
    rng = np.random.default_rng(params.seed)
    dom = problem.domain
    center = 0.5 * (dom.lo + dom.hi)
    width = float(np.min(dom.hi - dom.lo))
    n, dim = problem.n_sensors, dom.dim
    if n == 1:
        offset = rng.uniform(-0.05, 0.05, size=dim) * (dom.hi - dom.lo)
        return project_to_domain(center[None, :] + offset, dom)

    base = 2.0 * np.pi * np.arange(n) / n
    angles = base + rng.uniform(0.0, 2.0 * np.pi) + rng.uniform(
        -0.15, 0.15, size=n
    ) * (2.0 * np.pi / n)
    radial_factors = rng.uniform(0.92, 1.08, size=n)

    # A thin feasibility margin keeps the initial slack short: the slack
    # variable must drain before the constraint can activate, and it only
    # moves kappa*rho*(gap) per iteration.
    tau = problem.constraint_spec.tau
    margin = max(0.05, 0.1 * tau)

    def conn_slack(radius):
        x = _ring_positions(center, radius, angles, radial_factors, dim)
        values = eval_constraints(
            x, problem.edge_params, problem.constraint_spec
        ).values
        return values[0]

    lo, hi = 1e-3 * width, 0.42 * width
    if conn_slack(hi) <= -margin:
        radius = hi
    elif conn_slack(lo) > -margin:
        radius = lo
    else:
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if conn_slack(mid) <= -margin:
                lo = mid
            else:
                hi = mid
        radius = lo
    x = _ring_positions(center, radius, angles, radial_factors, dim)
    return project_to_domain(x, dom)


def _initial_state(problem, params, x0, slack_bound):
    if x0 is None:
        x = initial_positions(problem, params)
    else:
        x = check_positions(x0, dim=problem.domain.dim)
        if x.shape[0] != problem.n_sensors:
            raise ValueError(
                f"initial positions have {x.shape[0]} rows, expected {problem.n_sensors}"
            )
        if np.any(x < problem.domain.lo - 1e-12) or np.any(x > problem.domain.hi + 1e-12):
            raise ValueError("initial positions must lie inside the domain")
        x = project_to_domain(x, problem.domain)
    ev = _evaluate(x, problem)
    m = problem.constraint_spec.n_constraints(problem.n_sensors)
    u0 = np.clip(-ev.values, 0.0, slack_bound)
    state = SolverState(
        x=x, u=u0, z=np.zeros(m), lam=np.zeros(m), mu=np.zeros(m), t=0
    )
    return state, ev


def run(problem, params, x0=None):
    """Run the solver to convergence, the iteration cap, or failure.

    Stops early once all four KKT residuals fall to ``kkt_tol``. A step
    that produces non-finite values is retried once with both step sizes
    halved (they stay halved); a second failure terminates the run with
    the last finite state.
    """
    bound = params.slack_bound if params.slack_bound is not None else default_slack_bound(problem)
    state, ev = _initial_state(problem, params, x0, bound)
    records = [_make_record(state, ev, problem)]
    termination = TERMINATION_MAX_ITERS
    eta, kappa = params.eta, params.kappa
    halved = False
    t = 0
    while t < params.max_iters:
        try:
            new_state, new_ev = _step_core(state, ev, problem, params, eta, kappa, bound)
            record = _make_record(new_state, new_ev, problem)
            ok = _state_finite(new_state, record)
        except (SingularConfigurationError, FloatingPointError):
            ok = False
        if not ok:
            if halved:
                termination = TERMINATION_NUMERICAL
                break
            halved = True
            eta, kappa = 0.5 * eta, 0.5 * kappa
            continue
        state, ev = new_state, new_ev
        records.append(record)
        t += 1
        feas = record.max_violation
        compl = float(np.max(np.abs(state.lam * ev.values)))
        dual = float(max(np.max(-state.lam), 0.0))
        if max(record.stationarity, feas, compl, dual) <= params.kkt_tol:
            termination = TERMINATION_KKT
            break
    return Trajectory(
        records=records, final_state=state, termination=termination, params=params
    )
