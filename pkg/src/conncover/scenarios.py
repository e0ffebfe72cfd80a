"""Running scenarios end to end and summarizing finished runs."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from pathlib import Path

from .config import build_problem
from .graph import algebraic_connectivity, is_connected
from .serialize import read_summary, write_summary, write_trajectory
from .solver import kkt_residual, run


@dataclass
class RunSummary:
    """Final-state digest of one solver run."""

    run_id: str
    termination: str
    iterations: int
    coverage: float
    reg: float
    det_m: float
    connectivity: float
    feasibility: float
    stationarity: float
    complementarity: float
    dual_negativity: float
    boolean_connected: bool
    wall_time_s: float

    def to_dict(self):
        return dict(self.__dict__)


@dataclass
class ScenarioResult:
    """A finished run plus where its files were written."""

    config: object
    trajectory: object
    summary: RunSummary
    trajectory_path: Path
    summary_path: Path


def run_scenario(config, out_dir=None):
    """Solve one scenario and write its trajectory and summary files.

    Files are named ``trajectory.<run-id>`` and ``summary.<run-id>``
    inside ``out_dir`` (default: the config's ``out_dir``). The
    trajectory file is a pure function of the config, so identical
    configs produce identical bytes; wall time lives only in the summary.
    """
    problem, params, x0 = build_problem(config)
    start = time.perf_counter()
    trajectory = run(problem, params, x0=x0)
    wall = time.perf_counter() - start

    final = trajectory.final_state
    last = trajectory.records[-1]
    res = kkt_residual(final.x, final.lam, problem)
    lam2 = algebraic_connectivity(final.x, problem.edge_params)
    summary = RunSummary(
        run_id=config.run_id,
        termination=trajectory.termination,
        iterations=final.t,
        coverage=last.coverage,
        reg=last.reg,
        det_m=last.det_m,
        connectivity=float(lam2),
        feasibility=res.feasibility,
        stationarity=res.stationarity,
        complementarity=res.complementarity,
        dual_negativity=res.dual_negativity,
        boolean_connected=bool(is_connected(final.x, problem.edge_params)),
        wall_time_s=wall,
    )

    directory = Path(out_dir if out_dir is not None else config.out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    trajectory_path = directory / f"trajectory.{config.run_id}"
    summary_path = directory / f"summary.{config.run_id}"
    # The write destination is not part of the run definition; keeping it
    # out of the echo makes two runs of one config byte-identical no matter
    # where they land.
    echo = {k: v for k, v in config.to_dict().items() if k != "out_dir"}
    write_trajectory(
        trajectory, config.run_id, echo, trajectory_path, thin=config.thin
    )
    write_summary(summary.to_dict(), summary_path)
    return ScenarioResult(
        config=config,
        trajectory=trajectory,
        summary=summary,
        trajectory_path=trajectory_path,
        summary_path=summary_path,
    )


def sweep_values(raw):
    """Parse a --param specification like ``tau=-1,0.1,1``."""
    if "=" not in raw:
        raise ValueError(f"expected NAME=v1,v2,..., got {raw!r}")
    name, _, values = raw.partition("=")
    name = name.strip()
    try:
        parsed = [float(v) for v in values.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"could not parse sweep values {values!r}: {exc}") from exc
    if not parsed:
        raise ValueError(f"no sweep values given in {raw!r}")
    return name, parsed


def sweep_configs(config, param, values):
    """Clone a config once per sweep value, suffixing the run name."""
    numeric_fields = {
        "tau", "alpha", "w", "epsilon", "delta", "omega", "beta",
        "eta", "kappa", "sigma0", "kkt_tol",
    }
    int_fields = {"seed", "max_iters", "resolution", "n"}
    if param not in numeric_fields | int_fields:
        raise ValueError(f"cannot sweep over {param!r}")
    out = []
    for v in values:
        value = int(v) if param in int_fields else float(v)
        changes = {param: value, "name": f"{config.name}-{param}{value:g}"}
        if param == "alpha" and config.reg_kind == "none" and value != 0:
            changes["reg_kind"] = "centroid_quadratic"
        out.append(config.replace(**changes))
    return out


_COLUMNS = [
    ("run_id", "{}"),
    ("termination", "{}"),
    ("iterations", "{}"),
    ("coverage", "{:.6g}"),
    ("det_m", "{:.6g}"),
    ("connectivity", "{:.6g}"),
    ("feasibility", "{:.3g}"),
    ("stationarity", "{:.3g}"),
    ("wall_time_s", "{:.2f}"),
]


def summaries_from_paths(paths):
    """Load summaries from files or directories (searched one level)."""
    found = []
    for p in map(Path, paths):
        if p.is_dir():
            found.extend(sorted(p.glob("summary.*")))
        else:
            found.append(p)
    return [read_summary(p) for p in found]


def compare_runs(summaries, csv_format=False):
    """Fixed-width (or CSV) comparison table over run summaries."""
    headers = [name for name, _ in _COLUMNS]
    rows = []
    for s in summaries:
        row = []
        for name, fmt in _COLUMNS:
            value = s.get(name, "")
            row.append(fmt.format(value) if value != "" else "")
        rows.append(row)
    if csv_format:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(headers)
        writer.writerows(rows)
        return buf.getvalue()
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
    lines.append("  ".join("-" * widths[i] for i in range(len(headers))))
    for r in rows:
        lines.append("  ".join(r[i].ljust(widths[i]) for i in range(len(headers))))
    return "\n".join(lines) + "\n"
