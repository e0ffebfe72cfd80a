"""Reading and validating trajectory files.

A trajectory file is a single JSON document tagged with the
``conncover-trajectory-v1`` format string. Only the fields the renderer
needs are extracted; anything missing or malformed raises
:class:`TrajectoryError` with the offending path in the message.
"""

import json
from dataclasses import dataclass

import numpy as np

FORMAT = "conncover-trajectory-v1"


class TrajectoryError(Exception):
    """The file is absent, unreadable, or not a trajectory document."""


@dataclass(frozen=True)
class TrajectoryData:
    """The drawable content of one trajectory file.

    Attributes
    ----------
    run_id : str
        Identifier echoed into titles and output filenames.
    domain_lo, domain_hi : ndarray of shape (d,)
        Box corners of the placement domain.
    resolution : int
        Grid resolution the run integrated on; reused for the heatmap.
    density : str or list of dict
        ``"uniform"`` or Gaussian mixture components with ``mean``,
        ``sigma``, and ``weight`` keys.
    w, epsilon : float
        Sigmoid edge-weight steepness and communication radius.
    positions : ndarray of shape (T, n, d)
        Recorded sensor positions, one slab per stored iterate.
    """

    run_id: str
    domain_lo: np.ndarray
    domain_hi: np.ndarray
    resolution: int
    density: object
    w: float
    epsilon: float
    positions: np.ndarray


def _require(mapping, key, path):
    if key not in mapping:
        raise TrajectoryError(f"{path}: missing {key!r}")
    return mapping[key]


def load_trajectory(path):
    """Parse one trajectory file into :class:`TrajectoryData`."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise TrajectoryError(f"{path}: cannot read ({exc.strerror})") from exc
    except json.JSONDecodeError as exc:
        raise TrajectoryError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise TrajectoryError(f"{path}: not a trajectory file (format tag missing or wrong)")

    config = _require(doc, "config", path)
    records = _require(doc, "records", path)
    if not records:
        raise TrajectoryError(f"{path}: no recorded iterates")
    try:
        positions = np.asarray([rec["x"] for rec in records], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise TrajectoryError(f"{path}: malformed position records") from exc
    if positions.ndim != 3:
        raise TrajectoryError(f"{path}: positions are not (iterate, sensor, axis) shaped")
    if not np.all(np.isfinite(positions)):
        raise TrajectoryError(f"{path}: non-finite positions")

    try:
        data = TrajectoryData(
            run_id=str(_require(doc, "run_id", path)),
            domain_lo=np.asarray(_require(config, "domain_lo", path), dtype=float),
            domain_hi=np.asarray(_require(config, "domain_hi", path), dtype=float),
            resolution=int(_require(config, "resolution", path)),
            density=_require(config, "density", path),
            w=float(_require(config, "w", path)),
            epsilon=float(_require(config, "epsilon", path)),
            positions=positions,
        )
    except (TypeError, ValueError) as exc:
        raise TrajectoryError(f"{path}: malformed config echo") from exc
    if data.resolution < 2:
        raise TrajectoryError(f"{path}: resolution {data.resolution} below 2")
    return data
