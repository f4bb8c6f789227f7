"""JSON codecs for matrices, channels and reports.

Matrix JSON is ``{"dim": n, "entries": [[re, im], ...]}`` with exactly
``n * n`` finite ``[re, im]`` pairs in row-major order. Channel JSON is
``{"dim": n, "repr": "kraus" | "choi" | "superop", "data": ..., "meta":
{"name": ..., "params": ...}}`` with ``data`` a list of matrix JSON for
Kraus form. Report scalars that are not finite, such as ``p = inf``, are
written as the strings ``"inf"``, ``"-inf"`` and ``"nan"``.
"""

from __future__ import annotations

import dataclasses
import json
import math
import sys
from collections.abc import Mapping
from enum import Enum
from functools import singledispatch
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt

from qds_lab._channels import Channel, Representation
from qds_lab._exceptions import MalformedInputError, UsageError
from qds_lab._matcore import MAX_DIM, ComplexMatrix
from qds_lab._norms import InducedNormResult
from qds_lab._truncation import TailScan


def _float(value: float) -> float | str:
    if math.isfinite(value):
        return value
    if math.isnan(value):
        return "nan"
    return "inf" if value > 0 else "-inf"


def matrix_to_json(m: npt.ArrayLike, *, name: str = "matrix") -> dict[str, Any]:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        msg = f"{name}: expected a square matrix, got shape {a.shape}"
        raise MalformedInputError(msg)
    if not np.isfinite(a).all():
        msg = f"{name}: matrix JSON holds finite entries only"
        raise MalformedInputError(msg)
    entries = [[v.real, v.imag] for v in a.ravel().tolist()]
    return {"dim": a.shape[0], "entries": entries}


def _number(raw: Any, name: str) -> float:
    if isinstance(raw, bool) or not isinstance(raw, int | float):
        msg = f"{name}: expected a number, got {raw!r}"
        raise MalformedInputError(msg)
    value = float(raw)
    if not math.isfinite(value):
        msg = f"{name}: entries must be finite, got {raw!r}"
        raise MalformedInputError(msg)
    return value


def _pair(raw: Any, name: str) -> complex:
    if not isinstance(raw, list) or len(raw) != 2:
        msg = f"{name}: entries are [re, im] pairs, got {raw!r}"
        raise MalformedInputError(msg)
    return complex(_number(raw[0], name), _number(raw[1], name))


def matrix_from_json(obj: Any, *, name: str = "matrix") -> ComplexMatrix:
    if not isinstance(obj, Mapping):
        msg = f"{name}: expected an object with 'dim' and 'entries'"
        raise MalformedInputError(msg)
    n = obj.get("dim")
    entries = obj.get("entries")
    if isinstance(n, bool) or not isinstance(n, int) or not 1 <= n <= MAX_DIM:
        msg = f"{name}: dim must be an integer in [1, {MAX_DIM}], got {n!r}"
        raise MalformedInputError(msg)
    if not isinstance(entries, list) or len(entries) != n * n:
        size = len(entries) if isinstance(entries, list) else None
        msg = f"{name}: expected {n * n} entries for dim {n}, got {size}"
        raise MalformedInputError(msg)
    values = [_pair(raw, name) for raw in entries]
    return np.array(values, dtype=np.complex128).reshape(n, n)


def channel_to_json(
    channel: Channel,
    representation: Representation | None = None,
) -> dict[str, Any]:
    representation = representation or channel.representation
    if representation is Representation.KRAUS:
        data: Any = [matrix_to_json(k) for k in channel.kraus]
    elif representation is Representation.CHOI:
        data = matrix_to_json(channel.choi)
    else:
        data = matrix_to_json(channel.superop)
    return {
        "dim": channel.dim,
        "repr": representation.value,
        "data": data,
        "meta": {"name": channel.name, "params": to_jsonable(dict(channel.params))},
    }


def channel_from_json(obj: Any) -> Channel:
    if not isinstance(obj, Mapping):
        msg = "channel JSON must be an object"
        raise MalformedInputError(msg)
    try:
        representation = Representation(obj["repr"])
        data = obj["data"]
    except (KeyError, ValueError) as exc:
        msg = f"channel JSON needs 'repr' in kraus/choi/superop and 'data': {exc}"
        raise MalformedInputError(msg) from exc
    meta = obj.get("meta") or {}
    name = meta.get("name", "custom")
    params = meta.get("params") or {}
    if representation is Representation.KRAUS:
        if not isinstance(data, list) or not data:
            msg = "Kraus data must be a non-empty list of matrices"
            raise MalformedInputError(msg)
        ops = [matrix_from_json(k, name=f"kraus[{i}]") for i, k in enumerate(data)]
        if len({op.shape for op in ops}) != 1:
            msg = "Kraus operators have different shapes"
            raise MalformedInputError(msg)
        channel = Channel.from_kraus(np.stack(ops), name=name, params=params)
    elif representation is Representation.CHOI:
        channel = Channel.from_choi(matrix_from_json(data), name=name, params=params)
    else:
        channel = Channel.from_superop(matrix_from_json(data), name=name, params=params)
    if "dim" in obj and obj["dim"] != channel.dim:
        msg = f"channel dim {obj['dim']!r} does not match data of dim {channel.dim}"
        raise MalformedInputError(msg)
    return channel


@singledispatch
def to_jsonable(value: Any) -> Any:
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {
            f.name: to_jsonable(getattr(value, f.name))
            for f in dataclasses.fields(value)
        }
    msg = f"Cannot serialize {type(value).__name__}"
    raise TypeError(msg)


@to_jsonable.register(type(None))
@to_jsonable.register(str)
@to_jsonable.register(bool)
@to_jsonable.register(int)
def _jsonable_scalar(value: Any) -> Any:
    return value


@to_jsonable.register(float)
def _jsonable_float(value: float) -> float | str:
    return _float(value)


@to_jsonable.register(complex)
def _jsonable_complex(value: complex) -> Any:
    return [_float(value.real), _float(value.imag)]


@to_jsonable.register(Enum)
def _jsonable_enum(value: Enum) -> Any:
    return to_jsonable(value.value)


@to_jsonable.register(np.generic)
def _jsonable_numpy_scalar(value: np.generic) -> Any:
    return to_jsonable(value.item())


@to_jsonable.register(np.ndarray)
def _jsonable_array(value: npt.NDArray[Any]) -> Any:
    if value.ndim == 2 and value.shape[0] == value.shape[1]:
        return matrix_to_json(value)
    return [to_jsonable(v) for v in value.tolist()]


@to_jsonable.register(list)
@to_jsonable.register(tuple)
def _jsonable_sequence(value: list[Any] | tuple[Any, ...]) -> list[Any]:
    return [to_jsonable(v) for v in value]


@to_jsonable.register(dict)
def _jsonable_mapping(value: dict[Any, Any]) -> dict[str, Any]:
    return {str(k): to_jsonable(v) for k, v in value.items()}


@to_jsonable.register(Channel)
def _jsonable_channel(value: Channel) -> dict[str, Any]:
    return channel_to_json(value)


@to_jsonable.register(InducedNormResult)
def _jsonable_norm(value: InducedNormResult) -> dict[str, Any]:
    return {
        "p": _float(value.p),
        "lower": _float(value.lower_bound),
        "upper": _float(value.upper_bound),
        "method": value.method.value,
        "witness": matrix_to_json(value.witness),
    }


@to_jsonable.register(TailScan)
def _jsonable_tail_scan(value: TailScan) -> dict[str, Any]:
    return {
        "example_name": value.example_name,
        "p": _float(value.p),
        "ambient_dim": value.ambient_dim,
        "points": [[pt.rank, pt.tail_norm] for pt in value.points],
        "monotone": value.monotone,
        "classification": value.classification,
    }


def dumps(value: Any) -> str:
    """Deterministic JSON text with a trailing newline."""
    return json.dumps(to_jsonable(value), indent=2, allow_nan=False) + "\n"


def load_json(path: str) -> Any:
    """Read JSON from a file, or from stdin when ``path`` is ``-``."""
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        msg = f"cannot read {path}: {exc.strerror or exc}"
        raise UsageError(msg) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        msg = f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})"
        raise MalformedInputError(msg) from exc
