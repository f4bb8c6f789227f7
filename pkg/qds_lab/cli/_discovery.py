from __future__ import annotations

import importlib
import inspect
import logging
import pkgutil
import sys
from collections.abc import Callable
from dataclasses import dataclass
from typing import TYPE_CHECKING

from qds_lab import __version__
from qds_lab._exceptions import PropertyViolation, UsageError, ValidationError
from qds_lab.cli._argument_parser import (
    USAGE_EXIT_CODE,
    QdsArgumentParser,
    QdsHelpFormatter,
)
from qds_lab.cli._run_config import RunConfig

if TYPE_CHECKING:
    import argparse
    from types import ModuleType

    from qds_lab.cli._config import CliConfig


logger = logging.getLogger("qds_lab")

LOG_LEVEL_CHOICES = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG", "NOTSET")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PROPERTY = 3
EXIT_INTERRUPTED = 130


@dataclass
class Command:
    """A discovered subcommand module."""

    name: str
    module_name: str
    entry_point: Callable[[argparse.Namespace], int]
    setup_parser: Callable[[argparse.ArgumentParser], None] | None
    doc: str | None


def discover_commands(commands_package: ModuleType) -> dict[str, Command]:
    """Collect every public module of ``commands_package`` that defines ``main``.

    Modules starting with ``_`` are skipped. Modules that fail to import or
    expose a non-callable ``setup_parser`` are skipped with a warning.
    """
    if not getattr(commands_package, "__path__", None):
        msg = f"Module {commands_package.__name__!r} is not a package"
        raise AttributeError(msg)

    prefix = f"{commands_package.__name__}."
    commands: dict[str, Command] = {}
    for module_info in pkgutil.iter_modules(commands_package.__path__, prefix=prefix):
        module_name = module_info.name.rsplit(".", 1)[-1]
        if module_name.startswith("_"):
            continue
        try:
            module = importlib.import_module(module_info.name)
        except Exception as e:  # noqa: BLE001
            logger.warning("Failed to import module %s", module_info.name, exc_info=e)
            continue

        main_func = getattr(module, "main", None)
        if not callable(main_func):
            logger.warning("No entry point in %s, skipping", module_info.name)
            continue
        setup_parser_func = getattr(module, "setup_parser", None)
        if setup_parser_func is not None and not callable(setup_parser_func):
            logger.warning("%s.setup_parser is not callable, skipping", module_name)
            continue

        commands[module_name] = Command(
            name=module_name,
            module_name=module_info.name,
            entry_point=main_func,
            setup_parser=setup_parser_func,
            doc=inspect.getdoc(module) or None,
        )
    return dict(sorted(commands.items()))


def add_global_arguments(parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
    """Attach ``--log-level`` and the RunConfig options."""
    global_group = parser.add_argument_group("Global parameters")
    global_group.add_argument(
        "--log-level",
        default="WARNING",
        type=str.upper,
        choices=LOG_LEVEL_CHOICES,
        help="Logging level for diagnostics on stderr.",
    )
    if isinstance(parser, QdsArgumentParser):
        parser.parse_arguments_from_dataclass(RunConfig)
    return parser


def register_commands(
    subparsers: argparse._SubParsersAction[argparse.ArgumentParser],
    commands: dict[str, Command],
    add_globals: (
        Callable[[argparse.ArgumentParser], argparse.ArgumentParser] | None
    ) = None,
) -> None:
    for name, command in commands.items():
        help_text = command.doc.split("\n")[0] if command.doc else ""
        subparser = subparsers.add_parser(
            name,
            help=help_text,
            description=command.doc,
            formatter_class=QdsHelpFormatter,
        )
        if command.setup_parser:
            command.setup_parser(subparser)
        # global arguments go last in the help output
        if add_globals:
            add_globals(subparser)
        subparser.set_defaults(_command=command)


def _report_error(command: Command, exc: Exception) -> None:
    logger.debug("%s failed", command.name, exc_info=exc)
    print(f"{command.name}: error: {exc}", file=sys.stderr)


def run_command(command: Command, args: argparse.Namespace) -> int:
    """Run a command and map library errors to exit codes.

    0 success, 1 usage error, 2 invalid input, 3 property violation.
    """
    try:
        return command.entry_point(args) or EXIT_OK
    except UsageError as exc:
        _report_error(command, exc)
        return USAGE_EXIT_CODE
    except ValidationError as exc:
        _report_error(command, exc)
        return EXIT_VALIDATION
    except PropertyViolation as exc:
        _report_error(command, exc)
        return EXIT_PROPERTY


def setup_logging(log_level: str = "WARNING") -> None:
    level = getattr(logging, log_level.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    logging.getLogger("qds_lab").setLevel(level)


def setup_environment(args: argparse.Namespace) -> argparse.Namespace:
    setup_logging(getattr(args, "log_level", "WARNING"))
    return args


def setup_cli(
    args: list[str] | None = None,
    *,
    config: CliConfig,
    description: str = "",
    commands_package: ModuleType,
) -> int:
    """Discover commands, parse ``args`` and run the selected command.

    Returns the process exit code; parse errors give 1 and ``--help`` gives 0.
    """
    commands = config.discover_commands_func(commands_package)
    parser = QdsArgumentParser(
        prog=config.app_name,
        description=description,
        formatter_class=QdsHelpFormatter,
        env_prefix=config.env_prefix,
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
    )
    subparsers = parser.add_subparsers(
        title="commands",
        description="Available commands",
        dest="command",
        required=True,
    )
    register_commands(
        subparsers,
        commands,
        add_globals=config.add_global_arguments_func,
    )

    try:
        parsed_args = parser.parse_args(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_EXIT_CODE

    config.setup_environment_func(parsed_args)
    try:
        return run_command(parsed_args._command, parsed_args)  # noqa: SLF001
    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        return EXIT_INTERRUPTED
