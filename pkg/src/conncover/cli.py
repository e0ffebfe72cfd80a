"""Command-line interface: solve, sweep, and report subcommands."""

from __future__ import annotations

import argparse
import sys

from .config import list_presets, load_config, load_preset
from .errors import ConfigError
from .scenarios import (
    compare_runs,
    run_scenario,
    summaries_from_paths,
    sweep_configs,
    sweep_values,
)
from .solver import TERMINATION_NUMERICAL

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _add_common(parser):
    parser.add_argument("config", nargs="?", help="path to a scenario YAML file")
    parser.add_argument("--preset", help="name of a shipped preset scenario")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--out", help="override the output directory")
    parser.add_argument("--thin", type=int, help="keep every k-th trajectory record")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="conncover",
        description="Connectivity-constrained sensor coverage placement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run one scenario and write its files")
    _add_common(solve)

    sweep = sub.add_parser("sweep", help="run a scenario once per parameter value")
    _add_common(sweep)
    sweep.add_argument(
        "--param",
        required=True,
        help="sweep specification, e.g. tau=-1,0.1,1",
    )

    report = sub.add_parser("report", help="tabulate finished runs")
    report.add_argument("paths", nargs="+", help="summary files or run directories")
    report.add_argument("--csv", action="store_true", help="emit CSV instead of a table")

    sub.add_parser("presets", help="list shipped preset scenarios")
    return parser


def _resolve_config(args):
    if args.preset and args.config:
        raise ConfigError("give either a config path or --preset, not both")
    if args.preset:
        config = load_preset(args.preset)
    elif args.config:
        config = load_config(args.config)
    else:
        raise ConfigError("a config path or --preset is required")
    changes = {}
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError(f"seed: must be nonnegative, got {args.seed}")
        changes["seed"] = args.seed
    if args.out is not None:
        changes["out_dir"] = args.out
    if args.thin is not None:
        if args.thin < 1:
            raise ConfigError(f"thin: must be at least 1, got {args.thin}")
        changes["thin"] = args.thin
    return config.replace(**changes) if changes else config


def _print_result(result):
    s = result.summary
    print(
        f"{s.run_id}: {s.termination} after {s.iterations} iterations  "
        f"coverage={s.coverage:.6g} det_m={s.det_m:.6g} "
        f"feasibility={s.feasibility:.3g} wall={s.wall_time_s:.2f}s"
    )
    print(f"  wrote {result.trajectory_path}")
    print(f"  wrote {result.summary_path}")


def _cmd_solve(args):
    config = _resolve_config(args)
    result = run_scenario(config)
    _print_result(result)
    return EXIT_NUMERICAL if result.summary.termination == TERMINATION_NUMERICAL else EXIT_OK


def _cmd_sweep(args):
    config = _resolve_config(args)
    try:
        param, values = sweep_values(args.param)
        configs = sweep_configs(config, param, values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    worst = EXIT_OK
    summaries = []
    for cfg in configs:
        result = run_scenario(cfg)
        _print_result(result)
        summaries.append(result.summary.to_dict())
        if result.summary.termination == TERMINATION_NUMERICAL:
            worst = EXIT_NUMERICAL
    print()
    print(compare_runs(summaries), end="")
    return worst


def _cmd_report(args):
    try:
        summaries = summaries_from_paths(args.paths)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if not summaries:
        print("error: no summary files found", file=sys.stderr)
        return EXIT_CONFIG
    print(compare_runs(summaries, csv_format=args.csv), end="")
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "report":
            return _cmd_report(args)
        if args.command == "presets":
            for name in list_presets():
                print(name)
            return EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
