"""Pure construction of the drawable scene.

Everything here is a deterministic function of the parsed trajectory and
the threshold; rendering backends consume the result without touching
the input files again. Edge weights are recomputed from the final
positions with the same sigmoid the solver used, rather than read from
stored diagnostics, so a drifting file schema cannot silently change
what gets drawn.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class PanelSpec:
    """One run's panel: heatmap plus overlays, all in data coordinates."""

    run_id: str
    extent: tuple
    heatmap: np.ndarray
    paths: np.ndarray
    finals: np.ndarray
    edges: tuple


@dataclass(frozen=True)
class SceneSpec:
    """A figure: one panel per trajectory, sharing one threshold."""

    threshold: float
    panels: tuple = field(default_factory=tuple)


def density_grid(data):
    """Event density sampled at cell centers of the run's own grid.

    Uniform density renders as a constant field; mixtures as the sum of
    their unnormalized Gaussian bumps (the colormap rescales anyway).
    """
    res = data.resolution
    lo, hi = data.domain_lo, data.domain_hi
    xs = lo[0] + (hi[0] - lo[0]) * (np.arange(res) + 0.5) / res
    ys = lo[1] + (hi[1] - lo[1]) * (np.arange(res) + 0.5) / res
    gx, gy = np.meshgrid(xs, ys)
    if data.density == "uniform":
        return np.ones_like(gx)
    values = np.zeros_like(gx)
    for comp in data.density:
        mean = np.asarray(comp["mean"], dtype=float)
        sigma = float(comp["sigma"])
        weight = float(comp.get("weight", 1.0))
        sq = (gx - mean[0]) ** 2 + (gy - mean[1]) ** 2
        values += weight * np.exp(-sq / (2.0 * sigma * sigma))
    return values


def edge_set(finals, w, epsilon, threshold):
    """Sensor index pairs whose recomputed sigmoid weight clears the bar.

    Weight of pair (i, j) is expit(w * (epsilon - dist)); an edge is kept
    when the weight is at least ``threshold``, so the default 1/2 keeps
    exactly the pairs within distance epsilon.
    """
    finals = np.asarray(finals, dtype=float)
    n = finals.shape[0]
    edges = []
    for i in range(n - 1):
        dist = np.linalg.norm(finals[i + 1 :] - finals[i], axis=1)
        weight = 1.0 / (1.0 + np.exp(-w * (epsilon - dist)))
        for offset in np.flatnonzero(weight >= threshold):
            edges.append((i, i + 1 + int(offset)))
    return tuple(edges)


def build_panel(data, threshold):
    finals = data.positions[-1]
    return PanelSpec(
        run_id=data.run_id,
        extent=(
            float(data.domain_lo[0]),
            float(data.domain_hi[0]),
            float(data.domain_lo[1]),
            float(data.domain_hi[1]),
        ),
        heatmap=density_grid(data),
        paths=data.positions.transpose(1, 0, 2),  # per sensor: (T, d)
        finals=finals,
        edges=edge_set(finals, data.w, data.epsilon, threshold),
    )


def build_scene(trajectories, threshold=0.5):
    """Assemble the figure description for a list of parsed trajectories."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    if not trajectories:
        raise ValueError("at least one trajectory is required")
    for data in trajectories:
        if data.domain_lo.shape != (2,):
            raise ValueError(f"{data.run_id}: only planar runs can be drawn")
    return SceneSpec(
        threshold=threshold,
        panels=tuple(build_panel(data, threshold) for data in trajectories),
    )
