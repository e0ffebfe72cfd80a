"""Scenario configuration: YAML loading, validation, and problem building.

A scenario file is a flat YAML mapping. Unknown keys are rejected and
semantic violations raise :class:`ConfigError` naming the offending field,
so a typo cannot silently fall back to a default.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from .domain import Domain, GaussianComponent, GaussianMixtureDensity, attach_density, build_grid
from .errors import ConfigError
from .graph import EdgeWeightParams
from .constraints import ConstraintSpec
from .regularizers import Regularizer
from .solver import PlacementProblem, SolverParams


@dataclass(frozen=True)
class ScenarioConfig:
    """One solver run, fully specified.

    ``density`` is either the string "uniform" or a list of mixture
    components, each a mapping with keys mean, sigma, and optional
    weight. ``init_positions`` of None means seeded random
    initialization.
    """

    name: str
    n: int
    domain_lo: tuple = (0.0, 0.0)
    domain_hi: tuple = (1.0, 1.0)
    resolution: int = 100
    density: object = "uniform"
    w: float = 20.0
    epsilon: float = 0.1
    tau: float = -1.0
    min_distance_enabled: bool = False
    delta: float = 0.01
    reg_kind: str = "none"
    alpha: float = 0.0
    reg_centroid: tuple | None = None
    omega: float = 2.0
    beta: float = 0.5
    eta: float = 0.01
    kappa: float = 0.01
    sigma0: float = 0.5
    sigma_schedule: str = "harmonic"
    max_iters: int = 5000
    kkt_tol: float = 1e-5
    slack_bound: float | None = None
    seed: int = 0
    init_positions: tuple | None = None
    thin: int = 1
    out_dir: str = "runs"

    @property
    def run_id(self):
        return f"{self.name}-seed{self.seed}"

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        """Canonical plain-data form, used for file echoes."""
        d = dataclasses.asdict(self)
        d["domain_lo"] = list(self.domain_lo)
        d["domain_hi"] = list(self.domain_hi)
        if isinstance(self.density, (list, tuple)):
            d["density"] = [
                {
                    "mean": list(c["mean"]),
                    "sigma": c["sigma"],
                    "weight": c.get("weight", 1.0),
                }
                for c in self.density
            ]
        if self.reg_centroid is not None:
            d["reg_centroid"] = list(self.reg_centroid)
        if self.init_positions is not None:
            d["init_positions"] = [list(row) for row in self.init_positions]
        return d


_FIELD_NAMES = {f.name for f in dataclasses.fields(ScenarioConfig)}


def _fail(field, message):
    raise ConfigError(f"{field}: {message}")


def _as_float(raw, field, allow_none=False):
    if raw is None and allow_none:
        return None
    try:
        value = float(raw)
    except (TypeError, ValueError):
        _fail(field, f"expected a number, got {raw!r}")
    if not np.isfinite(value):
        _fail(field, f"must be finite, got {raw!r}")
    return value


def _as_int(raw, field):
    if isinstance(raw, bool) or (not isinstance(raw, (int, np.integer)) and int(raw) != raw):
        _fail(field, f"expected an integer, got {raw!r}")
    return int(raw)


def _validate_density(raw):
    if raw == "uniform":
        return "uniform"
    if not isinstance(raw, (list, tuple)) or not raw:
        _fail("density", 'expected "uniform" or a non-empty list of components')
    comps = []
    for i, comp in enumerate(raw):
        if not isinstance(comp, dict):
            _fail(f"density[{i}]", f"expected a mapping, got {comp!r}")
        unknown = set(comp) - {"mean", "sigma", "weight"}
        if unknown:
            _fail(f"density[{i}]", f"unknown keys {sorted(unknown)}")
        if "mean" not in comp or "sigma" not in comp:
            _fail(f"density[{i}]", "requires mean and sigma")
        mean = comp["mean"]
        if not isinstance(mean, (list, tuple)):
            _fail(f"density[{i}].mean", f"expected a coordinate list, got {mean!r}")
        sigma = _as_float(comp["sigma"], f"density[{i}].sigma")
        if sigma <= 0:
            _fail(f"density[{i}].sigma", f"must be positive, got {sigma}")
        weight = _as_float(comp.get("weight", 1.0), f"density[{i}].weight")
        if weight <= 0:
            _fail(f"density[{i}].weight", f"must be positive, got {weight}")
        comps.append(
            {"mean": [float(v) for v in mean], "sigma": sigma, "weight": weight}
        )
    return comps


def config_from_dict(raw, source="<dict>", default_name=None):
    """Validate a raw mapping into a :class:`ScenarioConfig`."""
    if not isinstance(raw, dict):
        raise ConfigError(f"{source}: expected a mapping at the top level")
    unknown = set(raw) - _FIELD_NAMES
    if unknown:
        raise ConfigError(f"{source}: unknown keys {sorted(unknown)}")

    merged = dict(raw)
    if "name" not in merged:
        if default_name is None:
            _fail("name", "is required")
        merged["name"] = default_name

    name = str(merged["name"])
    if not name:
        _fail("name", "must be non-empty")

    n = _as_int(merged.get("n", 0), "n")
    if n < 1:
        _fail("n", f"must be at least 1, got {n}")

    lo = merged.get("domain_lo", (0.0, 0.0))
    hi = merged.get("domain_hi", (1.0, 1.0))
    try:
        domain = Domain(lo=np.asarray(lo, dtype=float), hi=np.asarray(hi, dtype=float))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"domain_lo/domain_hi: {exc}") from exc

    resolution = _as_int(merged.get("resolution", 100), "resolution")
    if resolution < 2:
        _fail("resolution", f"must be at least 2, got {resolution}")

    density = _validate_density(merged.get("density", "uniform"))

    w = _as_float(merged.get("w", 20.0), "w")
    if w <= 0:
        _fail("w", f"must be positive, got {w}")
    epsilon = _as_float(merged.get("epsilon", 0.1), "epsilon")
    if epsilon <= 0:
        _fail("epsilon", f"must be positive, got {epsilon}")

    tau = _as_float(merged.get("tau", -1.0), "tau")
    min_dist = bool(merged.get("min_distance_enabled", False))
    delta = _as_float(merged.get("delta", 0.01), "delta")
    if min_dist and delta <= 0:
        _fail("delta", f"must be positive when min_distance_enabled, got {delta}")

    reg_kind = merged.get("reg_kind", "none")
    if reg_kind not in ("none", "centroid_quadratic"):
        _fail("reg_kind", f'must be "none" or "centroid_quadratic", got {reg_kind!r}')
    alpha = _as_float(merged.get("alpha", 0.0), "alpha")
    if alpha < 0:
        _fail("alpha", f"must be nonnegative, got {alpha}")
    if reg_kind == "none" and alpha != 0.0:
        _fail("alpha", "is set but reg_kind is none; set reg_kind centroid_quadratic")
    reg_centroid = merged.get("reg_centroid")
    if reg_centroid is not None:
        if not isinstance(reg_centroid, (list, tuple)) or len(reg_centroid) != domain.dim:
            _fail("reg_centroid", f"expected {domain.dim} coordinates, got {reg_centroid!r}")
        reg_centroid = tuple(float(v) for v in reg_centroid)

    omega = _as_float(merged.get("omega", 2.0), "omega")
    if omega <= 1:
        _fail("omega", f"must exceed 1, got {omega}")
    beta = _as_float(merged.get("beta", 0.5), "beta")
    if not 0 < beta < 1:
        _fail("beta", f"must lie in (0, 1), got {beta}")
    eta = _as_float(merged.get("eta", 0.01), "eta")
    if eta <= 0:
        _fail("eta", f"must be positive, got {eta}")
    kappa = _as_float(merged.get("kappa", 0.01), "kappa")
    if kappa <= 0:
        _fail("kappa", f"must be positive, got {kappa}")
    sigma0 = _as_float(merged.get("sigma0", 0.5), "sigma0")
    if sigma0 <= 0:
        _fail("sigma0", f"must be positive, got {sigma0}")
    sigma_schedule = merged.get("sigma_schedule", "harmonic")
    if sigma_schedule not in ("harmonic", "constant"):
        _fail("sigma_schedule", f'must be "harmonic" or "constant", got {sigma_schedule!r}')

    max_iters = _as_int(merged.get("max_iters", 5000), "max_iters")
    if max_iters < 0:
        _fail("max_iters", f"must be nonnegative, got {max_iters}")
    kkt_tol = _as_float(merged.get("kkt_tol", 1e-5), "kkt_tol")
    if kkt_tol < 0:
        _fail("kkt_tol", f"must be nonnegative, got {kkt_tol}")
    slack_bound = _as_float(merged.get("slack_bound"), "slack_bound", allow_none=True)
    if slack_bound is not None and slack_bound <= 0:
        _fail("slack_bound", f"must be positive, got {slack_bound}")

    seed = _as_int(merged.get("seed", 0), "seed")
    if seed < 0:
        _fail("seed", f"must be nonnegative, got {seed}")

    init = merged.get("init_positions")
    if init is not None:
        arr = np.asarray(init, dtype=float)
        if arr.ndim != 2 or arr.shape != (n, domain.dim):
            _fail(
                "init_positions",
                f"expected shape ({n}, {domain.dim}), got {arr.shape}",
            )
        if not np.all(np.isfinite(arr)):
            _fail("init_positions", "must be finite")
        if np.any(arr < domain.lo) or np.any(arr > domain.hi):
            _fail("init_positions", "must lie inside the domain box")
        init = tuple(tuple(float(v) for v in row) for row in arr)

    thin = _as_int(merged.get("thin", 1), "thin")
    if thin < 1:
        _fail("thin", f"must be at least 1, got {thin}")

    out_dir = str(merged.get("out_dir", "runs"))

    return ScenarioConfig(
        name=name,
        n=n,
        domain_lo=tuple(float(v) for v in np.atleast_1d(np.asarray(lo, dtype=float))),
        domain_hi=tuple(float(v) for v in np.atleast_1d(np.asarray(hi, dtype=float))),
        resolution=resolution,
        density=density,
        w=w,
        epsilon=epsilon,
        tau=tau,
        min_distance_enabled=min_dist,
        delta=delta,
        reg_kind=reg_kind,
        alpha=alpha,
        reg_centroid=reg_centroid,
        omega=omega,
        beta=beta,
        eta=eta,
        kappa=kappa,
        sigma0=sigma0,
        sigma_schedule=sigma_schedule,
        max_iters=max_iters,
        kkt_tol=kkt_tol,
        slack_bound=slack_bound,
        seed=seed,
        init_positions=init,
        thin=thin,
        out_dir=out_dir,
    )


def load_config(path):
    """Parse and validate a scenario YAML file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}" if mark is not None else str(path)
        raise ConfigError(f"{where}: invalid YAML: {exc}") from exc
    return config_from_dict(raw, source=str(path), default_name=path.stem)


def list_presets():
    """Names of the scenario presets shipped with the package."""
    root = resources.files("conncover") / "presets"
    return sorted(p.name[: -len(".yaml")] for p in root.iterdir() if p.name.endswith(".yaml"))


def load_preset(name):
    """Load a shipped preset by name."""
    root = resources.files("conncover") / "presets"
    candidate = root / f"{name}.yaml"
    if not candidate.is_file():
        raise ConfigError(
            f"preset: unknown preset {name!r}; available: {', '.join(list_presets())}"
        )
    raw = yaml.safe_load(candidate.read_text())
    return config_from_dict(raw, source=f"preset {name}", default_name=name)


def build_density(config, domain):
    if config.density == "uniform":
        return GaussianMixtureDensity.uniform(domain)
    comps = tuple(
        GaussianComponent(mean=c["mean"], sigma=c["sigma"], weight=c.get("weight", 1.0))
        for c in config.density
    )
    return GaussianMixtureDensity(components=comps)


def build_problem(config):
    """Materialize (problem, solver params, initial positions or None)."""
    domain = Domain(lo=np.asarray(config.domain_lo), hi=np.asarray(config.domain_hi))
    grid = attach_density(build_grid(domain, config.resolution), build_density(config, domain))
    if config.reg_kind == "centroid_quadratic":
        centroid = (
            np.asarray(config.reg_centroid, dtype=float)
            if config.reg_centroid is not None
            else domain.centroid
        )
        reg = Regularizer.centroid_quadratic(config.alpha, centroid)
    else:
        reg = Regularizer.none()
    problem = PlacementProblem(
        domain=domain,
        grid=grid,
        n_sensors=config.n,
        edge_params=EdgeWeightParams(w=config.w, epsilon=config.epsilon),
        constraint_spec=ConstraintSpec(
            tau=config.tau,
            delta=config.delta,
            min_distance_enabled=config.min_distance_enabled,
        ),
        regularizer=reg,
    )
    params = SolverParams(
        omega=config.omega,
        beta=config.beta,
        eta=config.eta,
        kappa=config.kappa,
        sigma0=config.sigma0,
        sigma_schedule=config.sigma_schedule,
        max_iters=config.max_iters,
        kkt_tol=config.kkt_tol,
        slack_bound=config.slack_bound,
        seed=config.seed,
    )
    x0 = None
    if config.init_positions is not None:
        x0 = np.asarray(config.init_positions, dtype=float)
    return problem, params, x0
