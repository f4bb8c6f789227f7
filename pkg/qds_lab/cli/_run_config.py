from __future__ import annotations

import argparse
from dataclasses import asdict, dataclass, field
from typing import Annotated, Any

from qds_lab._config import DEFAULT_SEED, DEFAULT_TOLERANCES, Tolerances
from qds_lab.cli._fields import Help, Parser, dict_from_args, from_dict

OUTPUT_FORMATS = ("json", "csv")


def parse_seed(raw: str) -> int:
    seed = int(raw)
    if not 0 <= seed < 2**64:
        msg = f"seed must be a 64-bit unsigned integer, got {raw}"
        raise ValueError(msg)
    return seed


def parse_format(raw: str) -> str:
    value = raw.strip().lower()
    if value not in OUTPUT_FORMATS:
        msg = f"format must be one of {', '.join(OUTPUT_FORMATS)}, got {raw!r}"
        raise ValueError(msg)
    return value


@dataclass(frozen=True, kw_only=True)
class RunConfig:
    """Options shared by every subcommand; recorded in each report."""

    seed: Annotated[
        int,
        Help("Seed for every random choice"),
        Parser(parse_seed),
    ] = DEFAULT_SEED
    tolerance: Annotated[
        dict[str, float],
        Help("Tolerance overrides, e.g. psd_tol=1e-8,tp_tol=1e-8"),
    ] = field(default_factory=dict)
    output: Annotated[str, Help("Output file, '-' for stdout")] = "-"
    format: Annotated[
        str,
        Help("Report format (json or csv)"),
        Parser(parse_format),
    ] = "json"

    @property
    def tolerances(self) -> Tolerances:
        return DEFAULT_TOLERANCES.with_overrides(self.tolerance)

    def as_report(self) -> dict[str, Any]:
        report = asdict(self)
        report["tolerances"] = self.tolerances.as_dict()
        return report


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    return from_dict(RunConfig, dict_from_args(args, RunConfig))
