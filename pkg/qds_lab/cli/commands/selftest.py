"""Run the built-in property suite; exits with 3 if any check fails.

Batch checks draw ``--trials`` random inputs (half of that for the
majorization round trip), e.g. ``selftest --trials 100`` for a quick run.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging

from qds_lab._selftest import SELFTEST_ASCENT, SELFTEST_TRIALS, run_selftest
from qds_lab.cli._reports import write_report
from qds_lab.cli._run_config import run_config_from_args

logger = logging.getLogger("qds_lab")


def setup_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--trials",
        type=int,
        default=SELFTEST_TRIALS,
        help="Random inputs per batch check",
    )


def main(args: argparse.Namespace) -> int:
    run = run_config_from_args(args)
    report = run_selftest(
        run.seed,
        tolerances=run.tolerances,
        settings=dataclasses.replace(SELFTEST_ASCENT, seed=run.seed),
        trials=args.trials,
    )
    write_report(
        "selftest",
        run,
        {
            "seed": report.seed,
            "trials": args.trials,
            "passed": report.passed,
            "checks": report.checks,
        },
        rows=[dataclasses.asdict(c) for c in report.checks],
    )
    if not report.passed:
        logger.error("selftest failures: %s", ", ".join(report.failures))
        return 3
    return 0
