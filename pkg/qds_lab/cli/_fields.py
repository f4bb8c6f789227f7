from __future__ import annotations

import argparse
import os
import types
import typing
from collections.abc import Callable, Sequence
from dataclasses import MISSING, Field, dataclass, fields
from functools import singledispatch
from types import NoneType
from typing import Annotated, Any, TypeVar, cast, get_args, get_origin

from qds_lab._exceptions import BadParameterError


class Parser:
    """Custom parser for a dataclass field, used inside ``Annotated``.

    Example:
        @dataclass
        class RunConfig:
            seed: Annotated[int, Parser(parse_seed)] = 0
    """

    def __init__(self, func: Callable[[str], Any]) -> None:
        self.func = func


class Help:
    """Help text for the CLI option generated from a dataclass field."""

    def __init__(self, description: str) -> None:
        self.description = description


@dataclass(frozen=True)
class FieldSpec:
    name: str
    type_: Any
    parser: Callable[[str], Any] | None
    help_text: str | None
    has_default: bool
    default: Any

    @property
    def option(self) -> str:
        return "--" + self.name.replace("_", "-")


def unwrap_annotated(field_type: Any) -> tuple[Any, Parser | None, Help | None]:
    if get_origin(field_type) is Annotated:
        base, *extras = get_args(field_type)
        parser = next((e for e in extras if isinstance(e, Parser)), None)
        help_wrapper = next((e for e in extras if isinstance(e, Help)), None)
        return base, parser, help_wrapper
    return field_type, None, None


def _field_default(dc_field: Field[Any]) -> tuple[bool, Any]:
    if dc_field.default is not MISSING:
        return True, dc_field.default
    if dc_field.default_factory is not MISSING:
        return True, dc_field.default_factory()
    return False, None


def field_specs_from_dataclass(dc_type: type[Any]) -> list[FieldSpec]:
    """One spec per field of a flat dataclass."""
    hints = typing.get_type_hints(dc_type, include_extras=True)
    specs = []
    for f in fields(dc_type):
        field_type, parser, help_wrapper = unwrap_annotated(hints.get(f.name, f.type))
        if get_origin(field_type) is typing.ClassVar:
            continue
        has_default, default = _field_default(f)
        specs.append(
            FieldSpec(
                name=f.name,
                type_=field_type,
                parser=parser.func if parser else None,
                help_text=help_wrapper.description if help_wrapper else None,
                has_default=has_default,
                default=default,
            ),
        )
    return specs


def dict_from_args(args: argparse.Namespace, dc_type: type[Any]) -> dict[str, Any]:
    """Values of the dataclass options that argparse actually set."""
    result = {}
    for spec in field_specs_from_dataclass(dc_type):
        if hasattr(args, spec.name):
            result[spec.name] = getattr(args, spec.name)
    return result


def env_name(option: str, env_prefix: str) -> str:
    """``--log-level`` with prefix ``QDS_`` becomes ``QDS_LOG_LEVEL``."""
    return f"{env_prefix}{option.lstrip('-').replace('-', '_').upper()}"


def env_for_argparser(
    parser: argparse.ArgumentParser,
    args: Sequence[str] | None = None,
    *,
    env_prefix: str = "",
) -> list[tuple[str, str, str]]:
    """``(option, variable, value)`` for options not given on the command line."""
    applied = {arg.split("=", maxsplit=1)[0] for arg in args or () if arg[:1] == "-"}
    found = []
    for action in parser._actions:  # noqa: SLF001
        if not isinstance(action, argparse._StoreAction):  # noqa: SLF001
            continue
        if any(opt in applied for opt in action.option_strings):
            continue
        for opt in action.option_strings:
            if not opt.startswith("--"):
                continue
            name = env_name(opt, env_prefix)
            if name in os.environ:
                found.append((opt, name, os.environ[name]))
    return found


@singledispatch
def parse_atom(expected_type: Any, raw: str) -> Any:  # noqa: ARG001
    msg = f"Not supported type: {expected_type!r}"
    raise TypeError(msg)


@parse_atom.register(str)
def _parse_str(_: str, raw: str) -> str:
    return raw


@parse_atom.register(int)
def _parse_int(_: int, raw: str) -> int:
    return int(raw)


@parse_atom.register(float)
def _parse_float(_: float, raw: str) -> float:
    return float(raw)


@parse_atom.register(bool)
def _parse_bool(_: bool, raw: str) -> bool:
    normalized = raw.strip().lower()
    if normalized in {"1", "true", "yes", "on"}:
        return True
    if normalized in {"0", "false", "no", "off"}:
        return False
    msg = f"Cannot parse boolean from {raw!r}"
    raise ValueError(msg)


def _optional_inner(hint: Any) -> Any | None:
    if get_origin(hint) in (types.UnionType, typing.Union):
        args = [a for a in get_args(hint) if a is not NoneType]
        if len(args) == 1:
            return args[0]
    return None


def parse_list(raw: str, item_type: Any) -> list[Any]:
    """Comma separated items, optionally wrapped in brackets."""
    text = raw.strip()
    if text.startswith("[") and text.endswith("]"):
        text = text[1:-1]
    chunks = (chunk.strip() for chunk in text.split(","))
    return [parse_value(item_type, chunk) for chunk in chunks if chunk]


def parse_dict(raw: str, key_type: Any, value_type: Any) -> dict[Any, Any]:
    """``k=v,k2=v2``; ``:`` works as separator too."""
    result = {}
    for pair in (piece for piece in raw.split(",") if piece.strip()):
        sep = "=" if "=" in pair else ":"
        if sep not in pair:
            msg = f"Cannot parse dict item {pair!r}"
            raise ValueError(msg)
        key, value = pair.split(sep, 1)
        result[parse_value(key_type, key.strip())] = parse_value(
            value_type,
            value.strip(),
        )
    return result


def parse_value(type_hint: Any, raw: Any) -> Any:
    if not isinstance(raw, str):
        return raw
    inner = _optional_inner(type_hint)
    if inner is not None:
        if raw.upper() in {"NULL", "NONE"}:
            return None
        return parse_value(inner, raw)
    origin = get_origin(type_hint)
    if origin is list:
        (item_type,) = get_args(type_hint) or (str,)
        return parse_list(raw, item_type)
    if origin is dict:
        key_type, value_type = get_args(type_hint) or (str, str)
        return parse_dict(raw, key_type, value_type)
    return parse_atom.dispatch(type_hint)(type_hint, raw)


T = TypeVar("T")


def from_dict(cls: type[T], data: dict[str, Any]) -> T:
    """Build a flat dataclass from raw option strings, applying field parsers."""
    parsed = {}
    for spec in field_specs_from_dataclass(cls):
        if spec.name not in data:
            if not spec.has_default:
                msg = f"Missing required option {spec.option}"
                raise BadParameterError(msg)
            continue
        raw = data[spec.name]
        try:
            if spec.parser and isinstance(raw, str):
                parsed[spec.name] = spec.parser(raw)
            else:
                parsed[spec.name] = parse_value(spec.type_, raw)
        except (TypeError, ValueError) as exc:
            msg = f"{spec.option}: {exc}"
            raise BadParameterError(msg) from exc
    return cast("type", cls)(**parsed)
