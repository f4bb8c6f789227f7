import sys

from qds_lab.cli import commands
from qds_lab.cli._config import CliConfig
from qds_lab.cli._discovery import setup_cli

DESCRIPTION = (
    "Build, certify and stress-test quantum doubly stochastic maps. "
    "Matrices and channels are read and written as JSON; '-' means stdin."
)


def main(argv: list[str] | None = None, *, config: CliConfig | None = None) -> int:
    return setup_cli(
        argv,
        config=config or CliConfig(),
        description=DESCRIPTION,
        commands_package=commands,
    )


def run() -> None:
    sys.exit(main())


__all__ = [
    "CliConfig",
    "main",
    "run",
]
