from __future__ import annotations

import argparse
import shlex
import sys
from collections.abc import Callable, Sequence
from typing import Any, NoReturn, TypeVar

from qds_lab.cli._fields import (
    FieldSpec,
    env_for_argparser,
    field_specs_from_dataclass,
    parse_value,
)

USAGE_EXIT_CODE = 1


class QdsHelpFormatter(argparse.HelpFormatter):
    """Append default values to help text in a consistent format."""

    def _get_help_string(self, action: argparse.Action) -> str:
        help_text = action.help or ""
        if getattr(action, "required", False):
            suffix = "Required"
        elif (
            action.default not in (None, argparse.SUPPRESS, False)
            and "%(default)" not in help_text
        ):
            suffix = "Default: %(default)s"
        else:
            return help_text
        if help_text.endswith("."):
            return f"{help_text} {suffix}"
        return f"{help_text}. {suffix}" if help_text else suffix


_N = TypeVar("_N", bound=argparse.Namespace)


class QdsArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that falls back to environment variables.

    Every long ``--option`` that takes a value can be set through
    ``<env_prefix><OPTION>`` (``QDS_SEED`` for ``--seed``); the command line
    wins when both are given. Flags (``store_true``) are not read from the
    environment. Parse errors exit with status 1.
    """

    def __init__(self, *args: Any, env_prefix: str = "", **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self.env_prefix = env_prefix

    def add_subparsers(self, **kwargs: Any) -> argparse._SubParsersAction:
        subparsers = super().add_subparsers(**kwargs)
        original_add_parser = subparsers.add_parser

        def add_parser_with_env_prefix(
            *args: Any,
            **parser_kwargs: Any,
        ) -> argparse.ArgumentParser:
            parser_kwargs.setdefault("env_prefix", self.env_prefix)
            return original_add_parser(*args, **parser_kwargs)

        subparsers.add_parser = add_parser_with_env_prefix  # type: ignore[method-assign]
        return subparsers

    def parse_known_args(  # type: ignore[override]
        self,
        args: Sequence[str] | None = None,
        namespace: _N | None = None,
    ) -> tuple[argparse.Namespace | _N, list[str]]:
        if args is None:
            args = sys.argv[1:]
        if env_values := env_for_argparser(self, args, env_prefix=self.env_prefix):
            args = list(args)
            if "-h" not in args and "--help" not in args:
                expanded = []
                for opt, _, val in env_values:
                    expanded.extend(shlex.split(f"{opt} {shlex.quote(val)}"))
                args = expanded + args
        return super().parse_known_args(args, namespace)

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT_CODE, f"{self.prog}: error: {message}\n")

    def _format_env_section(self) -> str:
        env_vars = []
        for opt, name, value in env_for_argparser(self, env_prefix=self.env_prefix):
            if len(value) > 50:
                value = value[:47] + "..."
            env_vars.append((opt, name, value))
        if not env_vars:
            return ""
        width = max(len(opt) for opt, _, _ in env_vars)
        lines = ["\nEnvironment variables set:"]
        lines.extend(
            f"  {opt:<{width}}  {name}={value}" for opt, name, value in env_vars
        )
        return "\n".join(lines) + "\n"

    def format_help(self) -> str:
        return super().format_help() + self._format_env_section()

    def parse_arguments_from_dataclass(self, dc_type: type[Any]) -> None:
        """Register one ``--option`` per field of a flat dataclass."""
        group = self.add_argument_group("Run parameters")
        for spec in field_specs_from_dataclass(dc_type):
            kwargs: dict[str, Any] = {
                "required": not spec.has_default,
                "dest": spec.name,
                "type": self.make_value_parser(spec),
            }
            if spec.has_default:
                kwargs["default"] = spec.default
            if spec.help_text:
                kwargs["help"] = spec.help_text
            group.add_argument(spec.option, **kwargs)

    @staticmethod
    def make_value_parser(spec: FieldSpec) -> Callable[[str], Any]:
        def validate(raw: str) -> str:
            try:
                # validation only; from_dict converts the raw string later
                if spec.parser:
                    spec.parser(raw)
                else:
                    parse_value(spec.type_, raw)
            except Exception as exc:
                msg = str(exc)
                raise argparse.ArgumentTypeError(msg) from exc
            return raw

        return validate
