"""Decompose a doubly stochastic matrix into weighted permutations."""

from __future__ import annotations

import argparse

import numpy as np

from qds_lab._exceptions import MalformedInputError, PropertyViolation
from qds_lab._majorization import DoublyStochasticMatrix, birkhoff_decompose
from qds_lab.cli._reports import read_matrix, write_report
from qds_lab.cli._run_config import run_config_from_args


def setup_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--matrix",
        required=True,
        help="Real doubly stochastic matrix JSON, '-' for stdin",
    )


def main(args: argparse.Namespace) -> int:
    run = run_config_from_args(args)
    tolerances = run.tolerances
    data = read_matrix(args.matrix)
    if np.abs(data.imag).max() > 0:
        msg = "doubly stochastic matrix must be real"
        raise MalformedInputError(msg)
    ds = DoublyStochasticMatrix.from_array(data.real, tolerances=tolerances)
    decomposition = birkhoff_decompose(ds, tolerances=tolerances)
    residual = float(np.abs(decomposition.reconstruct() - ds.entries).max())
    n = ds.dim
    write_report(
        "birkhoff",
        run,
        {
            "dim": n,
            "terms": len(decomposition.weights),
            "residual": residual,
            "weights": decomposition.weights,
            "permutations": decomposition.permutations,
        },
        rows=[
            {"weight": w, "permutation": " ".join(map(str, perm))}
            for w, perm in zip(
                decomposition.weights.tolist(),
                decomposition.permutations,
                strict=True,
            )
        ],
    )
    if len(decomposition.weights) > (n - 1) ** 2 + 1:
        msg = f"{len(decomposition.weights)} terms exceed (n-1)^2+1 for n={n}"
        raise PropertyViolation(msg)
    if residual > n * tolerances.ds_tol:
        msg = f"reconstruction residual {residual:.3e} for n={n}"
        raise PropertyViolation(msg)
    return 0
