"""Command-line entry point.

Exit codes: 0 on success, 1 when a trajectory file is missing or
corrupt, 2 on bad arguments such as an out-of-range threshold.
"""

import argparse
import sys

from .render import render
from .scene import build_scene
from .trajectory import TrajectoryError, load_trajectory

EXIT_OK = 0
EXIT_FILE = 1
EXIT_USAGE = 2


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plotviz",
        description="Render placement trajectory files as figures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    plot = sub.add_parser("plot", help="draw one figure with a panel per trajectory")
    plot.add_argument("trajectories", nargs="+", metavar="trajectory",
                      help="trajectory file path(s)")
    plot.add_argument("--threshold", type=float, default=0.5,
                      help="edge-weight cutoff in (0, 1) (default: 0.5)")
    plot.add_argument("--format", default="png", choices=("png", "svg", "pdf"),
                      help="image format (default: png)")
    plot.add_argument("--out", default=".", help="output directory (default: .)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if not 0.0 < args.threshold < 1.0:
        print(f"error: threshold must lie in (0, 1), got {args.threshold}",
              file=sys.stderr)
        return EXIT_USAGE
    try:
        trajectories = [load_trajectory(path) for path in args.trajectories]
    except TrajectoryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FILE
    try:
        scene = build_scene(trajectories, threshold=args.threshold)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    target = render(scene, args.out, fmt=args.format)
    print(f"wrote {target}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
