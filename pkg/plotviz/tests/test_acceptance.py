"""Acceptance gate for the renderer.

Two promises: the shipped preset sweep renders to image files without
error, and the edge set the renderer draws is exactly the edge set the
solver package computes from the same final positions.
"""

import numpy as np
import pytest
from conftest import frozen_run

from conncover import EdgeWeightParams, adjacency, load_preset, run_scenario
from plotviz import build_scene, load_trajectory
from plotviz.cli import EXIT_OK, main


@pytest.fixture(scope="module")
def preset_trajectories(tmp_path_factory):
    out = tmp_path_factory.mktemp("preset-runs")
    names = ["fig2-tau-1", "fig2-tau0.1", "fig2-tau1"]
    return [
        run_scenario(load_preset(name), out_dir=out).trajectory_path for name in names
    ]


class TestAcceptance:
    def test_criterion_presets_render(self, preset_trajectories, tmp_path):
        """Each preset trajectory renders alone, and the three together
        form one multi-panel figure, all without error."""
        for path in preset_trajectories:
            assert main(["plot", str(path), "--out", str(tmp_path)]) == EXIT_OK
        singles = sorted(p.name for p in tmp_path.glob("*.png"))
        assert singles == [
            "fig2-tau-1-seed42.png",
            "fig2-tau0.1-seed42.png",
            "fig2-tau1-seed42.png",
        ]
        assert all((tmp_path / name).stat().st_size > 0 for name in singles)

        code = main(
            ["plot", *map(str, preset_trajectories), "--out", str(tmp_path / "sweep")]
        )
        assert code == EXIT_OK
        combined = tmp_path / "sweep" / "fig2-tau-1-seed42+2.png"
        assert combined.exists() and combined.stat().st_size > 0

    def test_criterion_edge_set_matches_solver(self, preset_trajectories, tmp_path):
        """Drawn edges equal the solver's thresholded adjacency, as exact
        sets, on both a crafted fixture and a real preset result."""
        params = EdgeWeightParams(w=20.0, epsilon=0.1)
        fixture = frozen_run(
            tmp_path,
            [[0.2, 0.2], [0.27, 0.2], [0.31, 0.25], [0.8, 0.8], [0.86, 0.83], [0.5, 0.55]],
        )
        for path in [fixture, *preset_trajectories]:
            data = load_trajectory(path)
            drawn = set(build_scene([data]).panels[0].edges)
            weights = adjacency(data.positions[-1], params)
            n = weights.shape[0]
            expected = {
                (i, j) for i in range(n) for j in range(i + 1, n) if weights[i, j] >= 0.5
            }
            assert drawn == expected, f"{path.name}: {drawn} != {expected}"

    def test_fixture_actually_exercises_both_cases(self, tmp_path):
        # Guard: the crafted fixture must contain kept and dropped pairs,
        # otherwise the equality above could pass vacuously.
        fixture = frozen_run(tmp_path, [[0.2, 0.2], [0.27, 0.2], [0.8, 0.8]], name="guard")
        edges = build_scene([load_trajectory(fixture)]).panels[0].edges
        assert edges == ((0, 1),)
