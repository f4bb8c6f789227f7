"""Bracket the induced p->p norm of a channel.

Exact at p = 2; other exponents get a projected-ascent lower bound and an
interpolation upper bound. Exits with 3 when a certified QDS channel
shows a norm above 1.
"""

from __future__ import annotations

import argparse
import logging

from qds_lab._channels import certify_qds
from qds_lab._norms import (
    contraction_coefficient,
    diagonal_contraction_probe,
    induced_norm,
    traceless_norm,
)
from qds_lab.cli._reports import read_channel, write_report
from qds_lab.cli._run_config import run_config_from_args
from qds_lab.cli.commands._common import (
    NORM_SLACK,
    add_ascent_arguments,
    ascent_settings,
    exponent,
)

logger = logging.getLogger("qds_lab")


def setup_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--channel",
        required=True,
        help="Channel JSON file, '-' for stdin",
    )
    parser.add_argument(
        "--p",
        type=exponent,
        default=2.0,
        help="Schatten exponent in [1, inf]",
    )
    parser.add_argument(
        "--traceless",
        action="store_true",
        help="Restrict to traceless inputs",
    )
    parser.add_argument(
        "--probe",
        action="store_true",
        help="Also scan diagonal projections for strict contraction",
    )
    add_ascent_arguments(parser)


def main(args: argparse.Namespace) -> int:
    run = run_config_from_args(args)
    tolerances = run.tolerances
    settings = ascent_settings(args, run)
    channel = read_channel(args.channel)
    compute = traceless_norm if args.traceless else induced_norm
    result = compute(channel, args.p, tolerances=tolerances, settings=settings)
    probe = None
    if args.probe:
        probe = diagonal_contraction_probe(
            channel,
            args.p,
            tolerances=tolerances,
            seed=run.seed,
        )
    write_report(
        "norm",
        run,
        {
            "traceless": args.traceless,
            "norm": result,
            "contraction_coefficient": contraction_coefficient(channel),
            "probe": probe,
        },
        rows=[
            {
                "p": result.p,
                "lower": result.lower_bound,
                "upper": result.upper_bound,
                "method": result.method.value,
            },
        ],
    )
    qds = certify_qds(channel, tolerances=tolerances).is_qds
    if qds and result.lower_bound > 1 + NORM_SLACK:
        logger.error(
            "QDS channel %s has p=%s norm >= %.12f",
            channel.name,
            result.p,
            result.lower_bound,
        )
        return 3
    return 0
