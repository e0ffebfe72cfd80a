"""Connectivity-constrained sensor coverage placement.

Static placement of n sensors in a box so that expected sensing
uncertainty against an event density is minimized while the sigmoid-
weighted proximity graph of the sensors stays connected, enforced through
a smooth determinant constraint on the reduced Laplacian and solved with
a proximal-perturbed augmented Lagrangian method.
"""

from .config import (
    ScenarioConfig,
    build_problem,
    config_from_dict,
    list_presets,
    load_config,
    load_preset,
)
from .constraints import (
    ConstraintEvaluation,
    ConstraintSpec,
    MFCQReport,
    constraint_jacobian,
    eval_constraints,
    mfcq_diagnostic,
    pair_index_list,
)
from .coverage import (
    CoverageEvaluation,
    UncertaintyFunction,
    assign_voronoi,
    coverage_eval,
    coverage_gradient,
    coverage_value,
)
from .domain import (
    Domain,
    GaussianComponent,
    GaussianMixtureDensity,
    QuadratureGrid,
    WeightedPoints,
    attach_density,
    build_grid,
    check_positions,
    project_to_domain,
)
from .errors import ConfigError, DegenerateDensityError, SingularConfigurationError
from .estimator import ConnectedCoveragePlacement
from .graph import (
    EdgeWeightParams,
    ReducedLaplacian,
    adjacency,
    algebraic_connectivity,
    grad_det_m,
    is_connected,
    laplacian,
    partial_laplacian,
    projection_matrix,
    reduced_laplacian,
    sigmoid,
    sigmoid_prime,
)
from .regularizers import Regularizer, model_minimize, reg_gradient, reg_value
from .scenarios import RunSummary, compare_runs, run_scenario, sweep_configs
from .serialize import read_summary, read_trajectory, write_summary, write_trajectory
from .solver import (
    KKTResidual,
    IterateRecord,
    PlacementProblem,
    SolverParams,
    SolverState,
    Trajectory,
    default_slack_bound,
    grad_x_ppal,
    kkt_residual,
    ppal_value,
    run,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ConnectedCoveragePlacement",
    "ConstraintEvaluation",
    "ConstraintSpec",
    "CoverageEvaluation",
    "DegenerateDensityError",
    "Domain",
    "EdgeWeightParams",
    "GaussianComponent",
    "GaussianMixtureDensity",
    "IterateRecord",
    "KKTResidual",
    "MFCQReport",
    "PlacementProblem",
    "QuadratureGrid",
    "ReducedLaplacian",
    "Regularizer",
    "RunSummary",
    "ScenarioConfig",
    "SingularConfigurationError",
    "SolverParams",
    "SolverState",
    "Trajectory",
    "UncertaintyFunction",
    "WeightedPoints",
    "adjacency",
    "algebraic_connectivity",
    "assign_voronoi",
    "attach_density",
    "build_grid",
    "build_problem",
    "check_positions",
    "compare_runs",
    "config_from_dict",
    "constraint_jacobian",
    "coverage_eval",
    "coverage_gradient",
    "coverage_value",
    "default_slack_bound",
    "eval_constraints",
    "grad_det_m",
    "grad_x_ppal",
    "is_connected",
    "kkt_residual",
    "laplacian",
    "list_presets",
    "load_config",
    "load_preset",
    "mfcq_diagnostic",
    "model_minimize",
    "pair_index_list",
    "partial_laplacian",
    "ppal_value",
    "project_to_domain",
    "projection_matrix",
    "read_summary",
    "read_trajectory",
    "reduced_laplacian",
    "reg_gradient",
    "reg_value",
    "run",
    "run_scenario",
    "sigmoid",
    "sigmoid_prime",
    "step",
    "sweep_configs",
    "write_summary",
    "write_trajectory",
]
