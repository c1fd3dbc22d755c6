from __future__ import annotations

import argparse
import logging
import os
import pathlib
import sys

from interval_exchange.utils.error import ConfigError, PropertyViolation, UserException
from lab_logging.log_helper import setup_recursive_logger
from lab_logging.status_handler import ExperimentStateHandler, ExperimentStateLogger

stateHandler = ExperimentStateHandler()
stateLogger = ExperimentStateLogger(stateHandler)

# Set logging level from environment variable
log_level = os.environ["LOG_LEVEL"] if "LOG_LEVEL" in os.environ else "INFO"
setup_recursive_logger(log_level, stateLogger)

from interval_exchange.config.experiment_config import (
    EXPERIMENTS,
    ExperimentConfig,
    load_config,
    validate_config,
)
from interval_exchange.reports.plots import PlotKind, emit_plot
from interval_exchange.runner import ExperimentRunner

logger = logging.getLogger(__name__)

TARGET_FLAGS = {
    "gauge": "--iet",
    "constants": "--iet",
    "tau": "--iet",
    "discrepancy": "--iet",
    "induce": "--iet",
    "tower": "--iet",
    "bc-measure": "--iet",
    "cf": "--alpha",
    "akc": "--alpha",
    "kesten": "--alpha",
    "chebyshev": "--alpha",
    "mix3": "--alpha",
}

PARAMETERS = {
    "gauge": ["kind", "scale", "pairs", "metric", "x", "y", "plot", "asymptote"],
    "constants": ["alphas", "kinds", "pairs", "metric", "kind", "histogram-scale"],
    "tau": ["n-max", "keane-depth", "summability-scale", "j-max", "omega-n"],
    "discrepancy": ["mode", "n", "interval", "grid", "n-list", "samples"],
    "cf": ["depth", "type-n-max"],
    "liouville": ["scale", "k"],
    "akc": ["k", "c", "scale"],
    "kesten": ["m", "interval"],
    "chebyshev": ["samples"],
    "induce": ["interval", "rotation-b"],
    "tower": ["eps"],
    "towerbook": ["m", "n", "k", "mode", "rule", "seed-b", "leb", "sing", "p"],
    "mix3": ["t", "mrange", "cells"],
    "bc-measure": ["n", "c", "samples", "metric"],
    "decisive": ["points", "scale", "samples"],
}


class LabArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", type=str, default=None, help="INI or JSON config")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--horizon", dest="horizons", type=str, default=None)
    parser.add_argument("--exact", action="store_const", const=True, default=None)
    parser.add_argument("--out", type=str, default=None, help="CSV or JSON output")
    parser.add_argument("--csv", type=str, default=None)
    parser.add_argument("--json", type=str, default=None)
    parser.add_argument("--svg", type=str, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = LabArgumentParser(
        prog="iet-lab", description="Exact experiments on interval exchange maps"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name in EXPERIMENTS:
        experiment = sub.add_parser(name, help="Run the " + name + " experiment")
        _add_common(experiment)
        if name in TARGET_FLAGS:
            experiment.add_argument(TARGET_FLAGS[name], dest="target", type=str)
        for key in PARAMETERS[name]:
            experiment.add_argument("--" + key, dest="p_" + key.replace("-", "_"))

    run = sub.add_parser("run", help="Run a stored experiment config")
    _add_common(run)
    run.set_defaults(target=None)

    plot = sub.add_parser("plot", help="Render a CSV as SVG")
    plot.add_argument("--csv", type=str, required=True)
    plot.add_argument("--kind", choices=PlotKind.ALL, default=PlotKind.TRACE)
    plot.add_argument("--asymptote", type=float, default=None)
    plot.add_argument("--out", type=str, default=None)
    return parser


def _output_paths(args: argparse.Namespace) -> dict:
    paths = {"csv": args.csv, "json": args.json, "svg": args.svg}
    if args.out:
        out = pathlib.Path(args.out)
        if out.suffix.lower() == ".csv":
            paths["csv"] = paths["csv"] or str(out)
            paths["json"] = paths["json"] or str(out.with_suffix(".json"))
        else:
            paths["json"] = paths["json"] or str(out)
    return paths


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    if args.config:
        config = load_config(args.config)
    elif args.command == "run":
        raise ConfigError("run needs --config", field="config")
    else:
        config = validate_config({"experiment": args.command})

    overrides = {
        "target": args.target,
        "seed": args.seed,
        "horizons": args.horizons,
        "exact": args.exact,
        **_output_paths(args),
    }
    if args.command != "run":
        overrides["experiment"] = args.command

    parameters = {
        key[2:]: value
        for key, value in vars(args).items()
        if key.startswith("p_") and value is not None
    }
    return config.with_overrides(overrides, parameters)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "plot":
            emit_plot(args.csv, args.kind, args.out, asymptote=args.asymptote)
            return 0

        config = build_config(args)
        logger.debug("Config: %s", config.echo())
        ExperimentRunner(config, status_handler=stateHandler).run()
        return 0

    except PropertyViolation as e:
        logger.error("Property violated: %s", e)
        return 2
    except UserException as e:
        logger.error(e)
        return 1
    except Exception as e:
        logger.error("Exception while running the experiment: %s", e)
        raise


if __name__ == "__main__":
    sys.exit(main())
