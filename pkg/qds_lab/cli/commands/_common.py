from __future__ import annotations

import argparse

from qds_lab._config import DEFAULT_ASCENT, AscentSettings
from qds_lab._exceptions import BadExponentError
from qds_lab._matcore import check_exponent
from qds_lab.cli._fields import parse_value
from qds_lab.cli._run_config import RunConfig

# allowed excess of an ascent lower bound over the norm 1 of a QDS map
NORM_SLACK = 1e-6


def exponent(raw: str) -> float:
    try:
        return check_exponent(float(raw))
    except BadExponentError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def float_list(raw: str) -> list[float]:
    return parse_value(list[float], raw)


def int_list(raw: str) -> list[int]:
    return parse_value(list[int], raw)


def add_ascent_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("Projected ascent")
    group.add_argument(
        "--restarts",
        type=int,
        default=DEFAULT_ASCENT.restarts,
        help="Random restarts per norm estimate.",
    )
    group.add_argument(
        "--iterations",
        type=int,
        default=DEFAULT_ASCENT.iterations,
        help="Ascent iterations per restart.",
    )
    group.add_argument(
        "--step",
        type=float,
        default=DEFAULT_ASCENT.step,
        help="Initial step size.",
    )


def ascent_settings(args: argparse.Namespace, run: RunConfig) -> AscentSettings:
    return AscentSettings(
        restarts=args.restarts,
        iterations=args.iterations,
        step=args.step,
        seed=run.seed,
    )

