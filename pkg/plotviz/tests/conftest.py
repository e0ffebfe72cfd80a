"""Fixture trajectories, produced with the solver package.

The solver is a test-only dependency: the code under test reads the
files it writes, never its Python API.
"""

import numpy as np
import pytest
from conncover import config_from_dict, run_scenario


def write_run(out_dir, name="tiny", n=4, max_iters=30, tau=0.1, seed=0,
              init_positions=None, density=None, resolution=25):
    """Solve a small scenario and return its trajectory path."""
    mapping = {
        "name": name,
        "n": n,
        "resolution": resolution,
        "max_iters": max_iters,
        "eta": 0.05,
        "kappa": 0.05,
        "tau": tau,
        "seed": seed,
    }
    if init_positions is not None:
        mapping["init_positions"] = init_positions
    if density is not None:
        mapping["density"] = density
    result = run_scenario(config_from_dict(mapping), out_dir=out_dir)
    return result.trajectory_path


def frozen_run(out_dir, positions, name="frozen", **kwargs):
    """A zero-iteration run: the file's final positions equal ``positions``."""
    return write_run(
        out_dir,
        name=name,
        n=len(positions),
        max_iters=0,
        init_positions=[list(map(float, p)) for p in np.asarray(positions)],
        **kwargs,
    )


@pytest.fixture(scope="session")
def tiny_trajectory(tmp_path_factory):
    out = tmp_path_factory.mktemp("tiny")
    return write_run(out, density=[{"mean": [0.4, 0.4], "sigma": 0.15}])
