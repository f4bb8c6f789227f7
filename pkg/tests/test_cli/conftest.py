import json
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

import pytest

from qds_lab.cli import CliConfig, main
from qds_lab.cli._discovery import setup_cli
from tests.test_cli import fake_commands


@dataclass(frozen=True)
class CliResult:
    code: int
    out: str
    err: str

    def json(self) -> Any:
        return json.loads(self.out)


@pytest.fixture()
def run_cli(capsys) -> Callable[..., CliResult]:
    """Run ``qds-lab`` with the given arguments and capture its output."""

    def runner(*argv: str) -> CliResult:
        code = main(list(argv))
        captured = capsys.readouterr()
        return CliResult(code, captured.out, captured.err)

    return runner


@pytest.fixture()
def make_main():
    """Run the CLI against the fake command package."""

    def maker(args: list[str]) -> int:
        return setup_cli(
            args,
            config=CliConfig(app_name="test", env_prefix="TEST_"),
            commands_package=fake_commands,
        )

    return maker


@pytest.fixture()
def write_json(tmp_path):
    """Dump a JSON document into ``tmp_path`` and return its path."""

    def writer(name: str, document: Any) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(document))
        return str(path)

    return writer
