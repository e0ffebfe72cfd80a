"""Figure rendering for placement trajectory files.

The package consumes the primary solver only through its trajectory
files on disk: every quantity drawn (density heatmap, per-sensor path,
final markers, boolean edges) is recomputed here from the config echo
and the recorded positions, never read from auxiliary state.
"""

from .scene import PanelSpec, SceneSpec, build_scene, edge_set
from .trajectory import TrajectoryData, TrajectoryError, load_trajectory
from .render import figure_filename, render

__version__ = "0.1.0"

__all__ = [
    "PanelSpec",
    "SceneSpec",
    "TrajectoryData",
    "TrajectoryError",
    "build_scene",
    "edge_set",
    "figure_filename",
    "load_trajectory",
    "render",
]
