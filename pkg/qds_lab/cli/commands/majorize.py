"""Check whether rho is majorized by sigma and build a channel taking sigma to rho.

Without --realize only the partial-sum certificate is reported. With
--realize a mixed-unitary QDS channel with Phi(sigma) = rho is returned in
Kraus form; a pair that is not majorized exits with 2.
"""

from __future__ import annotations

import argparse
from typing import Any

from qds_lab._exceptions import PropertyViolation
from qds_lab._majorization import (
    check_majorization,
    convex_function_test,
    realize_channel,
)
from qds_lab.cli._reports import read_matrix, write_report
from qds_lab.cli._run_config import run_config_from_args


def setup_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--rho",
        required=True,
        help="Density matrix JSON of the target state",
    )
    parser.add_argument(
        "--sigma",
        required=True,
        help="Density matrix JSON of the source state",
    )
    parser.add_argument(
        "--realize",
        action="store_true",
        help="Construct the realizing channel",
    )
    parser.add_argument(
        "--convex",
        action="store_true",
        help="Compare trace f(rho) and trace f(sigma) for convex test functions",
    )


def main(args: argparse.Namespace) -> int:
    run = run_config_from_args(args)
    tolerances = run.tolerances
    rho = read_matrix(args.rho, "rho")
    sigma = read_matrix(args.sigma, "sigma")
    if args.realize:
        certificate = realize_channel(rho, sigma, tolerances=tolerances)
    else:
        certificate = check_majorization(rho, sigma, tolerances=tolerances)
    result: dict[str, Any] = {"certificate": certificate}
    convex = None
    if args.convex:
        convex = convex_function_test(rho, sigma, tolerances=tolerances)
        result["convex"] = convex
    rows = [
        {"k": k + 1, "lam_rho": lr, "lam_sigma": ls, "slack": slack}
        for k, (lr, ls, slack) in enumerate(
            zip(
                certificate.eigenvalues_rho.tolist(),
                certificate.eigenvalues_sigma.tolist(),
                certificate.partial_sum_slack.tolist(),
                strict=True,
            ),
        )
    ]
    write_report("majorize", run, result, rows=rows)
    if convex is not None and convex.majorized and convex.violations:
        msg = (
            "convex trace inequality fails for a majorized pair: "
            f"{[(c.kind, c.parameter) for c in convex.violations]}"
        )
        raise PropertyViolation(msg)
    return 0
