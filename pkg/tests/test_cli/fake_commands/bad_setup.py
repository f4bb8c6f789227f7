import argparse

setup_parser = "not callable"


def main(args: argparse.Namespace) -> int:  # noqa: ARG001  # pragma: no cover
    return 0
