from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from typing import TYPE_CHECKING

from qds_lab.cli._discovery import (
    Command,
    add_global_arguments,
    discover_commands,
    setup_environment,
)

if TYPE_CHECKING:
    import argparse
    from types import ModuleType


@dataclass(kw_only=True)
class CliConfig:
    app_name: str = "qds-lab"
    env_prefix: str = "QDS_"
    discover_commands_func: Callable[[ModuleType], dict[str, Command]] = (
        discover_commands
    )
    add_global_arguments_func: Callable[
        [argparse.ArgumentParser],
        argparse.ArgumentParser,
    ] = add_global_arguments
    setup_environment_func: Callable[[argparse.Namespace], argparse.Namespace] = (
        setup_environment
    )
