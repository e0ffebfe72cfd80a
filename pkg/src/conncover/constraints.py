"""Stacked inequality constraints and the constraint-qualification check.

Constraints use the g(x) <= 0 convention. Slot 0 holds the connectivity
constraint tau - det(M); when minimum-separation constraints are enabled
they follow in lexicographic pair order (0,1), (0,2), ..., (n-2, n-1),
each reading delta - distance(i, j).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from scipy.spatial.distance import pdist

from .domain import check_positions
from .graph import grad_det_m, reduced_laplacian

# Pair gradients shorter than this are treated as vanishing.
_ZERO_GRAD_TOL = 1e-14


@dataclass(frozen=True)
class ConstraintSpec:
    """Connectivity threshold plus optional pairwise separation.

    ``tau`` may be negative (commonly -1) to make the connectivity
    constraint vacuous while keeping the bookkeeping uniform. Separation
    constraints default to off.
    """

    tau: float
    delta: float = 0.01
    min_distance_enabled: bool = False

    def __post_init__(self):
        if not np.isfinite(self.tau):
            raise ValueError(f"tau must be finite, got {self.tau}")
        if self.min_distance_enabled and not self.delta > 0:
            raise ValueError(
                f"delta must be positive when separation is enabled, got {self.delta}"
            )

    def n_constraints(self, n):
        if self.min_distance_enabled and n >= 2:
            return 1 + n * (n - 1) // 2
        return 1


def activation_tolerance(spec):
    """Default active-set tolerance, scaled by the threshold magnitude."""
    return 1e-6 * max(1.0, abs(spec.tau))


def pair_index_list(n):
    """Lexicographic (i, j) pairs matching the constraint stacking order."""
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


@dataclass
class ConstraintEvaluation:
    """Stacked constraint values, optional Jacobian, and active slots.

    ``values`` has the connectivity slot first; ``jacobian`` (when
    present) has one row per constraint and n*d columns ordered sensor-
    major. ``active_set`` lists slots within the activation tolerance of
    zero.
    """

    values: np.ndarray
    jacobian: np.ndarray | None
    active_set: np.ndarray


def eval_constraints(x, params, spec, activation_tol=None):
    """Constraint values at ``x`` (no Jacobian)."""
    x = check_positions(x)
    n = x.shape[0]
    red = reduced_laplacian(x, params)
    values = [spec.tau - red.det]
    if spec.min_distance_enabled and n >= 2:
        values.extend(spec.delta - pdist(x))
    values = np.asarray(values, dtype=float)
    tol = activation_tolerance(spec) if activation_tol is None else activation_tol
    active = np.flatnonzero(np.abs(values) <= tol)
    return ConstraintEvaluation(values=values, jacobian=None, active_set=active)


def constraint_jacobian(x, params, spec):
    """Jacobian of the stacked constraints, one row per constraint.

    Row 0 is minus the determinant gradient; pair rows differentiate
    delta - distance(i, j), nonzero only in the two involved sensor
    blocks.
    """
    x = check_positions(x)
    n, d = x.shape
    m = spec.n_constraints(n)
    jac = np.zeros((m, n * d))
    jac[0] = -grad_det_m(x, params).ravel()
    if spec.min_distance_enabled and n >= 2:
        for row, (i, j) in enumerate(pair_index_list(n), start=1):
            diff = x[i] - x[j]
            dist = np.linalg.norm(diff)
            if dist < _ZERO_GRAD_TOL:
                # Coincident pair: leave the row zero; the diagnostic
                # reports it instead of dividing by zero.
                continue
            g = diff / dist
            jac[row, i * d : (i + 1) * d] = -g
            jac[row, j * d : (j + 1) * d] = g
    return jac


@dataclass
class MFCQReport:
    """Outcome of the constraint-qualification diagnostic.

    ``direction`` (when present) satisfies grad g_i . direction < 0 for
    every active constraint with the reported ``margin``, under the
    max-norm bound |direction|_inf <= 1.
    """

    active_set: np.ndarray
    satisfied: bool
    vacuous: bool
    direction: np.ndarray | None
    margin: float
    method: str
    notes: list = field(default_factory=list)


def _extremal_candidate(x, active_rows, jac, n, d, pairs_active):
    """Interior-pointing direction built from a coordinate-extremal sensor.

    Moving the sensor with the smallest coordinate along that axis (into
    the group) strictly decreases the connectivity constraint whenever the
    reduced Laplacian is nonsingular; a scaled radial term handles active
    separation pairs that do not involve the extremal sensor.
    """
    notes = []
    # Pick the axis with the widest spread so "extremal" is unambiguous.
    spreads = x.max(axis=0) - x.min(axis=0)
    k = int(np.argmax(spreads))
    if spreads[k] <= 0:
        return None, ["all sensors coincide along every axis"]
    l = int(np.argmin(x[:, k]))
    direction = np.zeros(n * d)
    direction[l * d + k] = 1.0
    involved = [
        row for row in pairs_active if l in row[1]
    ]
    if involved:
        notes.append(
            "extremal sensor participates in an active separation pair; "
            "sparse construction not applicable"
        )
        return None, notes
    if pairs_active:
        # Radial blend: scaling every other sensor away from the origin
        # pushes all active pairs apart at rate delta each.
        scale_dir = x.copy().ravel()
        scale_dir[l * d : (l + 1) * d] = 0.0
        base = jac[active_rows] @ direction
        blend = jac[active_rows] @ scale_dir
        # Choose t small enough to keep the connectivity row negative.
        worst = np.max(blend) if np.max(blend) > 0 else 0.0
        t = 1.0
        if worst > 0:
            t = min(1.0, 0.5 * float(np.max(-base)) / worst) if np.max(-base) > 0 else 0.0
        direction = direction + t * scale_dir
    norm = np.max(np.abs(direction))
    if norm > 0:
        direction = direction / norm
    return direction, notes


def mfcq_diagnostic(x, params, spec, activation_tol=None):
    """Check for a direction strictly decreasing every active constraint.

    Solves a small bounded linear program maximizing the worst-case
    decrease margin over the active constraint gradients; an analytic
    candidate from the extremal-sensor construction seeds the report when
    the LP is unavailable. No active constraints yields a vacuous pass.
    """
    x = check_positions(x)
    n, d = x.shape
    cons = eval_constraints(x, params, spec, activation_tol=activation_tol)
    active = cons.active_set
    if active.size == 0:
        return MFCQReport(
            active_set=active,
            satisfied=True,
            vacuous=True,
            direction=None,
            margin=np.inf,
            method="vacuous",
            notes=["no active constraints"],
        )
    jac = constraint_jacobian(x, params, spec)
    rows = jac[active]
    row_norms = np.linalg.norm(rows, axis=1)
    notes = []
    if np.any(row_norms < _ZERO_GRAD_TOL):
        bad = active[row_norms < _ZERO_GRAD_TOL]
        return MFCQReport(
            active_set=active,
            satisfied=False,
            vacuous=False,
            direction=None,
            margin=0.0,
            method="degenerate-gradient",
            notes=[f"active constraint(s) {bad.tolist()} have vanishing gradients"],
        )

    pairs_active = []
    if spec.min_distance_enabled and n >= 2:
        pair_list = pair_index_list(n)
        for slot in active:
            if slot >= 1:
                pairs_active.append((slot, pair_list[slot - 1]))

    candidate, cand_notes = _extremal_candidate(x, active, jac, n, d, pairs_active)
    notes.extend(cand_notes)

    # LP: maximize s subject to rows @ dvec + s <= 0, |dvec|_inf <= 1.
    nvars = n * d
    c = np.zeros(nvars + 1)
    c[-1] = -1.0
    A_ub = np.hstack([rows, np.ones((rows.shape[0], 1))])
    b_ub = np.zeros(rows.shape[0])
    bounds = [(-1.0, 1.0)] * nvars + [(0.0, None)]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    direction = None
    margin = 0.0
    method = "linprog"
    if res.status == 0:
        direction = res.x[:-1]
        margin = float(-np.max(rows @ direction))
    elif candidate is not None:
        direction = candidate
        margin = float(-np.max(rows @ candidate))
        method = "extremal-construction"
        notes.append(f"linear program failed with status {res.status}; used construction")
    else:
        notes.append(f"linear program failed with status {res.status}")
        method = "failed"
    satisfied = direction is not None and margin > 0.0
    return MFCQReport(
        active_set=active,
        satisfied=satisfied,
        vacuous=False,
        direction=direction,
        margin=margin,
        method=method,
        notes=notes,
    )
