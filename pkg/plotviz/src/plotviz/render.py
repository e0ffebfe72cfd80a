"""Matplotlib backend: scene in, image file out."""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def figure_filename(run_ids, fmt):
    """Stable output name: first run id, plus a panel count when joined."""
    if len(run_ids) == 1:
        return f"{run_ids[0]}.{fmt}"
    return f"{run_ids[0]}+{len(run_ids) - 1}.{fmt}"


def render(scene, out_dir, fmt="png"):
    """Draw the scene into ``out_dir`` and return the written path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    k = len(scene.panels)
    fig, axes = plt.subplots(1, k, figsize=(4.0 * k, 4.0), squeeze=False)
    try:
        for ax, panel in zip(axes[0], scene.panels):
            ax.imshow(
                panel.heatmap,
                origin="lower",
                extent=panel.extent,
                cmap="viridis",
                aspect="equal",
            )
            for path in panel.paths:
                ax.plot(path[:, 0], path[:, 1], color="white", linewidth=0.8, alpha=0.85)
            for i, j in panel.edges:
                ax.plot(
                    [panel.finals[i, 0], panel.finals[j, 0]],
                    [panel.finals[i, 1], panel.finals[j, 1]],
                    color="orangered",
                    linewidth=1.6,
                )
            ax.scatter(
                panel.finals[:, 0], panel.finals[:, 1],
                s=36, color="white", edgecolors="black", zorder=5,
            )
            ax.set_xlim(panel.extent[0], panel.extent[1])
            ax.set_ylim(panel.extent[2], panel.extent[3])
            ax.set_title(panel.run_id, fontsize=9)
        fig.tight_layout()
        target = out_dir / figure_filename([p.run_id for p in scene.panels], fmt)
        fig.savefig(target, dpi=150)
    finally:
        plt.close(fig)
    return target
