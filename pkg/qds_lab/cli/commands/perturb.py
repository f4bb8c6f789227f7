"""Sweep a perturbation family around a QDS channel.

For each eps the deviations delta_tr and delta_un of Psi_eps are compared
with its distance to Phi. Exits with 3 when a member with zero deviation
sits at positive distance or when the norm of Psi_eps drifts from 1 faster
than the fitted bound allows.
"""

from __future__ import annotations

import argparse
import logging
from dataclasses import asdict

from qds_lab._perturbation import FAMILIES, perturbation_sweep
from qds_lab.cli._reports import read_channel, read_matrix, write_report
from qds_lab.cli._run_config import run_config_from_args
from qds_lab.cli.commands._common import (
    add_ascent_arguments,
    ascent_settings,
    exponent,
    float_list,
)

logger = logging.getLogger("qds_lab")


def setup_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--phi",
        required=True,
        help="Base QDS channel JSON file",
    )
    parser.add_argument(
        "--family",
        choices=FAMILIES,
        default="additive",
        help="Perturbation family",
    )
    parser.add_argument(
        "--eps-grid",
        type=float_list,
        default="1e-1,1e-2,1e-3,1e-4",
        help="Comma separated perturbation sizes",
    )
    parser.add_argument(
        "--p",
        type=exponent,
        default=2.0,
        help="Schatten exponent, 1 < p < inf",
    )
    parser.add_argument(
        "--direction",
        help="Matrix JSON for a in Phi + eps a trace (additive family)",
    )
    parser.add_argument(
        "--unitary",
        help="Unitary JSON mixed into Phi (mixture family); random when omitted",
    )
    add_ascent_arguments(parser)


def main(args: argparse.Namespace) -> int:
    run = run_config_from_args(args)
    phi = read_channel(args.phi)
    sweep = perturbation_sweep(
        phi,
        args.family,
        args.eps_grid,
        args.p,
        a=read_matrix(args.direction, "direction") if args.direction else None,
        u=read_matrix(args.unitary, "unitary") if args.unitary else None,
        seed=run.seed,
        tolerances=run.tolerances,
        settings=ascent_settings(args, run),
    )
    write_report(
        "perturb",
        run,
        sweep,
        rows=[asdict(r) for r in sweep.reports],
    )
    if not sweep.consistent or not sweep.norm_stable:
        logger.error(
            "perturbation bound fails for family %s (consistent=%s, norm_stable=%s)",
            sweep.family,
            sweep.consistent,
            sweep.norm_stable,
        )
        return 3
    return 0
