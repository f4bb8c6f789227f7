"""Write an example channel as JSON.

Only the options the chosen constructor accepts may be given, e.g.
``zoo depolarizing --t 0.5 --n 4`` or ``zoo damped_pinching --truncation 32``.
"""

from __future__ import annotations

import argparse
from typing import Any

from qds_lab._channels import ZOO, Representation, channel_zoo
from qds_lab._exceptions import MalformedInputError
from qds_lab._serialization import channel_to_json, load_json, matrix_from_json
from qds_lab.cli._reports import read_matrix, write_document
from qds_lab.cli._run_config import run_config_from_args
from qds_lab.cli.commands._common import float_list


def setup_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("name", choices=sorted(ZOO), help="Example channel")
    parser.add_argument("--t", type=float, help="Depolarizing parameter in [0, 1]")
    parser.add_argument("--n", type=int, help="Dimension")
    parser.add_argument(
        "--truncation",
        dest="truncation",
        type=int,
        help="Truncation dimension of shift_average and damped_pinching",
    )
    parser.add_argument("--ratio", type=float, help="damped_pinching decay ratio")
    parser.add_argument(
        "--weights",
        type=float_list,
        help="Comma separated weights (mixed_unitary, damped_pinching)",
    )
    parser.add_argument(
        "--unitaries",
        help="JSON list of unitary matrices for mixed_unitary",
    )
    parser.add_argument("--unitary", help="Unitary matrix JSON for unitary")
    parser.add_argument(
        "--repr",
        choices=[r.value for r in Representation],
        help="Representation to write; defaults to the constructor's own",
    )


def _unitaries(path: str) -> list[Any]:
    raw = load_json(path)
    if not isinstance(raw, list):
        msg = f"{path}: expected a JSON list of matrices"
        raise MalformedInputError(msg)
    return [matrix_from_json(m, name=f"unitaries[{i}]") for i, m in enumerate(raw)]


def main(args: argparse.Namespace) -> int:
    run = run_config_from_args(args)
    params: dict[str, Any] = {
        "t": args.t,
        "n": args.n,
        "truncation": args.truncation,
        "ratio": args.ratio,
        "weights": args.weights,
    }
    if args.unitaries:
        params["unitaries"] = _unitaries(args.unitaries)
    if args.unitary:
        params["u"] = read_matrix(args.unitary, "unitary")
    channel = channel_zoo(
        args.name,
        **{k: v for k, v in params.items() if v is not None},
    )
    representation = Representation(args.repr) if args.repr else None
    write_document("zoo", run, channel_to_json(channel, representation))
    return 0
