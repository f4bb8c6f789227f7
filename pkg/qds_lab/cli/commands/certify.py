"""Certify that a channel is quantum doubly stochastic.

Reports the trace-preservation and unitality residuals, the smallest Choi
eigenvalue and a sampled positivity check. A negative verdict is a valid
result and exits with 0.
"""

from __future__ import annotations

import argparse
from dataclasses import asdict

from qds_lab._channels import certify_qds, positivity_probe
from qds_lab.cli._reports import read_channel, write_report
from qds_lab.cli._run_config import run_config_from_args


def setup_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--channel",
        required=True,
        help="Channel JSON file, '-' for stdin",
    )
    parser.add_argument(
        "--trials",
        type=int,
        default=256,
        help="Random pure states for the positivity probe",
    )


def main(args: argparse.Namespace) -> int:
    run = run_config_from_args(args)
    channel = read_channel(args.channel)
    report = certify_qds(channel, tolerances=run.tolerances)
    probe = positivity_probe(
        channel,
        trials=args.trials,
        seed=run.seed,
        tolerances=run.tolerances,
    )
    result = {
        "channel": {"name": channel.name, "dim": channel.dim},
        "certificate": report,
        "positivity": probe,
    }
    write_report("certify", run, result, rows=[asdict(report)])
    return 0
