import os
import tempfile
from pathlib import Path
from typing import Callable, Generator

import pytest

# the report ledger goes to a throwaway SQLite file for the whole session
os.environ["APP_DATABASE_URL"] = f"sqlite:///{Path(tempfile.gettempdir()) / f'interior_runs_{os.getpid()}.db'}"

from app.database import reset_db  # noqa: E402
from app.digraph import DiGraph  # noqa: E402
from app.instances import digraph_instance, render  # noqa: E402


@pytest.fixture()
def new_db() -> Generator[None, None, None]:
    """Reset database for each test."""
    reset_db()
    yield
    reset_db()


@pytest.fixture()
def write_instance(tmp_path: Path) -> Callable[[str, str], Path]:
    """Write instance text to a file under tmp_path and return its path."""

    def write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path

    return write


@pytest.fixture()
def digraph_file(write_instance: Callable[[str, str], Path]) -> Callable[[str, DiGraph], Path]:
    def write(name: str, G: DiGraph) -> Path:
        return write_instance(name, render(digraph_instance(G)))

    return write
