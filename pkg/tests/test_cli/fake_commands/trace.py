"""Print the trace of a matrix.

Second paragraph of the description.
"""

import argparse

from qds_lab._matcore import trace
from qds_lab.cli._reports import read_matrix


def setup_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--matrix", required=True, help="Matrix JSON file")


def main(args: argparse.Namespace) -> int:
    print(f"TRACE={trace(read_matrix(args.matrix)).real:g}")
    return 0
