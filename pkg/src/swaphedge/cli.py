"""Command line entry point.

One subcommand per named experiment.  Options resolve in increasing
precedence: built-in defaults, top-level config keys, the experiment's
config section, command line flags.  Unknown config keys are rejected
with the offending key path.  Results land in ``<out>/<experiment>/`` as
a CSV, a replay manifest, and (unless disabled) PNG figures.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - 3.10 fallback
    import tomli as tomllib

from .experiments import EXPERIMENTS, ConfigError, render_csv, \
    resolve_options
from .plots import render_figures

log = logging.getLogger("swaphedge")

GLOBAL_KEYS = ("seed", "samples", "steps", "workers", "out", "figures")
RUNTIME_KEYS = ("workers", "out", "figures")


def load_config(path: Path) -> dict:
    try:
        with open(path, "rb") as handle:
            return tomllib.load(handle)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as err:
        raise ConfigError(f"{path}: {err}") from None


def split_config(config: dict, experiment: str) -> tuple[dict, dict]:
    """Validate key names and return (runtime keys, experiment overrides)."""
    runtime = {}
    overrides = {}
    spec = EXPERIMENTS[experiment].options
    for key, value in config.items():
        if isinstance(value, dict):
            if key not in EXPERIMENTS:
                raise ConfigError(f"{key}: unknown experiment section")
            continue
        if key not in GLOBAL_KEYS:
            raise ConfigError(f"{key}: unknown top-level key")
        if key in RUNTIME_KEYS:
            runtime[key] = value
        elif key in spec:
            overrides[key] = value
    section = config.get(experiment, {})
    for key, value in section.items():
        if key not in spec:
            raise ConfigError(f"{experiment}.{key}: unknown option")
        overrides[key] = value
    return runtime, overrides


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swaphedge",
        description="hedging experiments for swaps under liquidity costs")
    sub = parser.add_subparsers(dest="experiment", required=True,
                                metavar="experiment")
    lister = sub.add_parser("list", help="list the available experiments")
    lister.set_defaults(experiment="list")
    for name, experiment in EXPERIMENTS.items():
        cmd = sub.add_parser(name, help=experiment.description)
        cmd.add_argument("--config", type=Path, metavar="FILE",
                         help="TOML configuration file")
        cmd.add_argument("--seed", type=int, help="master seed override")
        cmd.add_argument("--samples", type=int,
                         help="Monte Carlo samples per value estimate")
        if "steps" in experiment.options:
            cmd.add_argument("--steps", type=int,
                             help="optimizer iteration override")
        cmd.add_argument("--workers", type=int,
                         help="thread count for grid points (default 1)")
        cmd.add_argument("--out", type=Path, metavar="DIR",
                         help="output directory (default results)")
        cmd.add_argument("--figures", default=None,
                         action=argparse.BooleanOptionalAction,
                         help="render PNG figures (default on)")
    return parser


def _resolve(args) -> tuple[dict, dict]:
    config = load_config(args.config) if args.config else {}
    runtime, overrides = split_config(config, args.experiment)
    for key in ("seed", "samples", "steps"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    for key in RUNTIME_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            runtime[key] = value
    runtime.setdefault("workers", 1)
    runtime.setdefault("out", "results")
    runtime.setdefault("figures", True)
    if not isinstance(runtime["workers"], int) or runtime["workers"] < 1:
        raise ConfigError("workers: expected an integer >= 1")
    if not isinstance(runtime["figures"], bool):
        raise ConfigError("figures: expected a boolean")
    options = resolve_options(args.experiment, overrides)
    return runtime, options


def _write_outputs(result, runtime) -> list[Path]:
    import json

    out_dir = Path(runtime["out"]) / result.name
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    csv_path = out_dir / f"{result.name}.csv"
    csv_path.write_text(render_csv(result))
    paths.append(csv_path)
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(
        json.dumps(result.manifest, indent=2, sort_keys=True) + "\n")
    paths.append(manifest_path)
    if runtime["figures"]:
        paths.extend(render_figures(result, out_dir))
    return paths


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s",
                        stream=sys.stderr)
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.experiment == "list":
        for name, experiment in EXPERIMENTS.items():
            print(f"{name:20s} {experiment.description}")
        return 0
    try:
        runtime, options = _resolve(args)
        result = EXPERIMENTS[args.experiment].run(options,
                                                  runtime["workers"])
        paths = _write_outputs(result, runtime)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
