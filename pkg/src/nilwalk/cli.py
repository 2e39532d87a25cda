"""
Command-Line Interface

    python -m nilwalk [--config FILE] [--seed N] [--workers N] [--out DIR]
                      [--budget-seconds S] [--log-level LEVEL]
                      {analyze,simulate,norm,volume,oracle}

Every run prints one JSON document holding the resolved config and the result.
With --out the same document is written to report.json, the config alone to
resolved_config.json and tabular rows to results.csv.

Exit codes:
    0  success
    2  schema violation or invalid argument
    3  unsupported backend or operation
    4  resource budget exceeded; partial results are flushed with "truncated": true

Note:
    This module is an integral part of the nilwalk toolkit.
"""

import argparse
import csv
import json
import logging
import os
import sys

from ._utils import Dispatcher
from .commands import Analyze, Norm, Oracle, Simulate, Volume
from .errors import ConfigError, InvalidArgumentError, NilwalkError, NotInSpanError, ResourceLimitError, UnsupportedError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_SCHEMA = 2
EXIT_UNSUPPORTED = 3
EXIT_RESOURCE = 4

COMMANDS = {
    "analyze": Analyze,
    "simulate": Simulate,
    "norm": Norm,
    "volume": Volume,
    "oracle": Oracle,
}

dispatcher = Dispatcher()
for _name, _command in COMMANDS.items():
    dispatcher.register(_name, _command)


def _global_flags():
    flags = argparse.ArgumentParser(add_help=False)
    flags.add_argument("--config", default=argparse.SUPPRESS, help="JSON run configuration")
    flags.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="master seed")
    flags.add_argument("--workers", type=int, default=argparse.SUPPRESS, help="worker processes")
    flags.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
    flags.add_argument("--budget-seconds", dest="budget_seconds", type=float, default=argparse.SUPPRESS,
                       help="wall-clock budget of a simulation")
    flags.add_argument("--log-level", dest="log_level", default=argparse.SUPPRESS,
                       choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return flags


def build_parser():
    flags = _global_flags()
    parser = argparse.ArgumentParser(prog="nilwalk", parents=[flags],
                                     description="Return-probability exponents of random walks on nilpotent groups.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, command in COMMANDS.items():
        summary = (command.__doc__ or "").strip().splitlines()[0]
        subparsers.add_parser(name, parents=[flags], help=summary)
    return parser


def load_config(path, command):
    if path is None:
        return {}
    try:
        with open(path) as handle:
            config = json.load(handle)
    except OSError as error:
        raise ConfigError("Cannot read config {}: {}".format(path, error)) from None
    except json.JSONDecodeError as error:
        raise ConfigError("Config {} is not valid JSON: {}".format(path, error)) from None
    if not isinstance(config, dict):
        raise ConfigError("Config must be a JSON object")
    named = config.pop("command", command)
    if named != command:
        raise ConfigError("Config is for '{}', not '{}'".format(named, command))
    return config


def write_outputs(directory, document):
    os.makedirs(directory, exist_ok=True)
    with open(os.path.join(directory, "report.json"), "w") as handle:
        json.dump(document, handle, indent=2, default=str)
    with open(os.path.join(directory, "resolved_config.json"), "w") as handle:
        json.dump(document["config"], handle, indent=2, default=str)
    rows = document["result"].get("rows")
    if rows:
        with open(os.path.join(directory, "results.csv"), "w", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)


def main(argv=None):
    args = build_parser().parse_args(argv)
    options = vars(args)
    logging.basicConfig(
        level=options.get("log_level", "INFO"),
        stream=sys.stderr,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    overrides = {key: options.get(key) for key in ("seed", "workers", "budget_seconds")}

    try:
        config = load_config(options.get("config"), args.command)
        command = dispatcher.dispatch(args.command, config, overrides)
    except InvalidArgumentError as error:
        logger.error("%s", error)
        return EXIT_SCHEMA

    code = EXIT_OK
    try:
        result = command.run()
    except ResourceLimitError as error:
        logger.error("Budget exceeded: %s", error)
        result = dict(command.partial or {})
        result["error"] = str(error)
        result["truncated"] = True
        code = EXIT_RESOURCE
    except UnsupportedError as error:
        logger.error("%s", error)
        return EXIT_UNSUPPORTED
    except (InvalidArgumentError, NotInSpanError) as error:
        logger.error("%s", error)
        return EXIT_SCHEMA
    except NilwalkError as error:
        logger.error("%s", error)
        return EXIT_FAILURE
    if result.get("truncated"):
        code = EXIT_RESOURCE

    document = {
        "command": args.command,
        "config": command.resolved_config(),
        "result": result,
        "truncated": bool(result.get("truncated", False)),
    }
    print(json.dumps(document, indent=2, default=str))
    if options.get("out"):
        write_outputs(options["out"], document)
    logger.info("%s finished with exit code %d", args.command, code)
    return code


__all__ = [
    "build_parser",
    "load_config",
    "write_outputs",
    "main",
]
