"""Engine and session helpers for the report ledger."""

import logging
import os

from sqlmodel import Session, SQLModel, create_engine

from app.models import VerificationRun  # noqa: F401  registers the table

logger = logging.getLogger(__name__)

DATABASE_URL = os.environ.get("APP_DATABASE_URL", "sqlite:///interior_runs.db")


def _connect_args(url: str) -> dict:
    match url.split(":", 1)[0]:
        case "postgresql" | "postgresql+psycopg2":
            return {"connect_timeout": 15, "options": "-c statement_timeout=5000"}
        case "sqlite":
            # batch verify workers may store runs concurrently
            return {"timeout": 30}
        case _:
            return {}


ENGINE = create_engine(DATABASE_URL, connect_args=_connect_args(DATABASE_URL))


def create_tables() -> None:
    """Create missing ledger tables; called before every store or listing."""
    SQLModel.metadata.create_all(ENGINE)


def get_session() -> Session:
    return Session(ENGINE)


def reset_db() -> None:
    """Drop and recreate the ledger. Tests only."""
    logger.debug(f"resetting ledger at {ENGINE.url}")
    SQLModel.metadata.drop_all(ENGINE)
    SQLModel.metadata.create_all(ENGINE)
