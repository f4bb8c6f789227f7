"""Induced norms of a QDS channel over a grid of exponents.

Every lower bound must stay below 1 and every upper bound must equal 1;
violations exit with 3.
"""

from __future__ import annotations

import argparse
import logging

from qds_lab._norms import interpolation_sweep, sweep_violations
from qds_lab.cli._reports import read_channel, write_report
from qds_lab.cli._run_config import run_config_from_args
from qds_lab.cli.commands._common import (
    NORM_SLACK,
    add_ascent_arguments,
    ascent_settings,
    float_list,
)

logger = logging.getLogger("qds_lab")


def setup_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--channel",
        required=True,
        help="Channel JSON file, '-' for stdin",
    )
    parser.add_argument(
        "--p-grid",
        type=float_list,
        default="1,1.5,2,3,inf",
        help="Comma separated exponents",
    )
    add_ascent_arguments(parser)


def main(args: argparse.Namespace) -> int:
    run = run_config_from_args(args)
    channel = read_channel(args.channel)
    results = interpolation_sweep(
        channel,
        args.p_grid,
        tolerances=run.tolerances,
        settings=ascent_settings(args, run),
    )
    violations = sweep_violations(results, NORM_SLACK)
    rows = [
        {
            "p": r.p,
            "lower": r.lower_bound,
            "upper": r.upper_bound,
            "method": r.method.value,
        }
        for r in results
    ]
    write_report(
        "sweep",
        run,
        {"results": results, "violations": violations},
        rows=rows,
    )
    if violations:
        logger.error("norm bound violated at p in %s", violations)
        return 3
    return 0
