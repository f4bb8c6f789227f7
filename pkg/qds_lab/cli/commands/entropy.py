"""Compare the von Neumann entropy of rho and Phi(rho).

Entropies are in nats unless --bits is given. Exits with 3 when the
increase leaves [0, log d].
"""

from __future__ import annotations

import argparse
import logging
from dataclasses import asdict

from qds_lab._entropy import entropy_monotonicity_check
from qds_lab.cli._reports import read_channel, read_matrix, write_report
from qds_lab.cli._run_config import run_config_from_args

logger = logging.getLogger("qds_lab")


def setup_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--channel",
        required=True,
        help="QDS channel JSON file",
    )
    parser.add_argument(
        "--rho",
        required=True,
        help="Density matrix JSON file",
    )
    parser.add_argument(
        "--bits",
        action="store_true",
        help="Report entropies in bits",
    )


def main(args: argparse.Namespace) -> int:
    run = run_config_from_args(args)
    channel = read_channel(args.channel)
    rho = read_matrix(args.rho, "rho")
    report = entropy_monotonicity_check(channel, rho, tolerances=run.tolerances)
    if args.bits:
        report = report.in_bits()
    write_report(
        "entropy",
        run,
        {"units": "bits" if args.bits else "nats", "report": report},
        rows=[asdict(report)],
    )
    if report.counterexample:
        logger.warning(
            "entropy did not grow strictly although strict growth was expected",
        )
    if not report.within_bound:
        logger.error("entropy change %.3e outside [0, log d]", report.delta)
        return 3
    return 0
