"""Reading command inputs and writing reports."""

from __future__ import annotations

import csv
import io
import sys
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

from qds_lab import __version__
from qds_lab._channels import Channel
from qds_lab._exceptions import UsageError
from qds_lab._matcore import ComplexMatrix
from qds_lab._serialization import (
    channel_from_json,
    dumps,
    load_json,
    matrix_from_json,
    to_jsonable,
)
from qds_lab.cli._run_config import RunConfig


def read_channel(path: str) -> Channel:
    return channel_from_json(load_json(path))


def read_matrix(path: str, name: str = "matrix") -> ComplexMatrix:
    return matrix_from_json(load_json(path), name=name)


def _csv_text(rows: Sequence[Mapping[str, Any]]) -> str:
    buffer = io.StringIO()
    if rows:
        writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows({k: to_jsonable(v) for k, v in row.items()} for row in rows)
    return buffer.getvalue()


def write_report(
    command: str,
    run: RunConfig,
    result: Any,
    rows: Sequence[Mapping[str, Any]] | None = None,
) -> None:
    """Emit ``result`` as JSON, or ``rows`` as CSV when ``--format csv``.

    JSON reports carry the tool version and the effective run configuration.
    """
    if run.format == "csv":
        if rows is None:
            msg = f"{command} has no CSV form; use --format json"
            raise UsageError(msg)
        text = _csv_text(rows)
    else:
        text = dumps(
            {
                "tool_version": __version__,
                "command": command,
                "run_config": run.as_report(),
                "result": result,
            },
        )
    _write(run, text)


def write_document(command: str, run: RunConfig, document: Any) -> None:
    """Emit a bare JSON document, such as a channel, that other commands read back."""
    if run.format != "json":
        msg = f"{command} only writes JSON"
        raise UsageError(msg)
    _write(run, dumps(document))


def _write(run: RunConfig, text: str) -> None:
    if run.output == "-":
        sys.stdout.write(text)
        return
    try:
        Path(run.output).write_text(text)
    except OSError as exc:
        msg = f"cannot write {run.output}: {exc.strerror or exc}"
        raise UsageError(msg) from exc
