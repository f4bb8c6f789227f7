"""Tail norms of a truncated example over increasing ranks.

A tail that tends to 0 marks compact-like behaviour. Exits with 3 when the
tails increase with the rank.
"""

from __future__ import annotations

import argparse
import dataclasses

from qds_lab._truncation import (
    COMPACT_THRESHOLD,
    DEFAULT_TRUNCATION,
    TAIL_EXAMPLES,
    scan,
)
from qds_lab.cli._reports import write_report
from qds_lab.cli._run_config import run_config_from_args
from qds_lab.cli.commands._common import (
    add_ascent_arguments,
    ascent_settings,
    exponent,
    int_list,
)


def setup_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--example",
        required=True,
        choices=TAIL_EXAMPLES,
        help="Truncated example channel",
    )
    parser.add_argument(
        "--truncation",
        dest="truncation",
        type=int,
        default=DEFAULT_TRUNCATION,
        help="Truncation dimension",
    )
    parser.add_argument(
        "--p",
        type=exponent,
        default=2.0,
        help="Schatten exponent in [1, inf]",
    )
    parser.add_argument(
        "--ranks",
        type=int_list,
        default="4,8,16,32",
        help="Comma separated projection ranks",
    )
    parser.add_argument(
        "--ratio",
        type=float,
        default=0.5,
        help="Decay ratio of damped_pinching weights",
    )
    parser.add_argument(
        "--threshold",
        type=float,
        default=COMPACT_THRESHOLD,
        help="Final tail below which the example counts as compact-like",
    )
    parser.add_argument(
        "--csv",
        action="store_true",
        help="Write rank,tail_norm rows; same as --format csv",
    )
    add_ascent_arguments(parser)


def main(args: argparse.Namespace) -> int:
    run = run_config_from_args(args)
    if args.csv:
        run = dataclasses.replace(run, format="csv")
    result = scan(
        args.example,
        args.p,
        args.ranks,
        truncation=args.truncation,
        ratio=args.ratio,
        threshold=args.threshold,
        tolerances=run.tolerances,
        settings=ascent_settings(args, run),
    )
    write_report(
        "tailscan",
        run,
        result,
        rows=[{"rank": pt.rank, "tail_norm": pt.tail_norm} for pt in result.points],
    )
    return 0 if result.monotone else 3
