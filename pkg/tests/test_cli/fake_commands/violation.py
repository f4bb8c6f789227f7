import argparse

from qds_lab._exceptions import PropertyViolation


def main(args: argparse.Namespace) -> int:  # noqa: ARG001
    msg = "norm above 1"
    raise PropertyViolation(msg)
