from sqlmodel import SQLModel, Field, JSON, Column
from datetime import datetime
from enum import StrEnum
from typing import Optional, List, Dict, Any


class CheckStatus(StrEnum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIP = "SKIP"
    # reported finding, never turns the exit code red
    NOTE = "NOTE"


# Persistent models (stored in database)
class VerificationRun(SQLModel, table=True):
    """One stored command run with its machine-readable report."""

    __tablename__ = "verification_runs"  # type: ignore[assignment]

    id: Optional[int] = Field(default=None, primary_key=True)
    command: str = Field(max_length=50)
    instance_digest: str = Field(max_length=64, index=True)
    instance_kind: str = Field(max_length=20)
    exit_code: int = Field(default=0)
    wall_time: float = Field(default=0.0, ge=0)
    created_at: datetime = Field(default_factory=datetime.utcnow, index=True)

    report: Dict[str, Any] = Field(default={}, sa_column=Column(JSON))


# Non-persistent schemas (command options, reports, listings)
class CommandOptions(SQLModel, table=False):
    """Flags shared by all subcommands."""

    root: Optional[int] = Field(default=None, ge=0)
    order: Optional[List[int]] = Field(default=None)
    seed: int = Field(default=0)
    max_edges: Optional[int] = Field(default=None, gt=0)
    trust_tu: bool = Field(default=False)


class CheckOutcome(SQLModel, table=False):
    """Result of one identity checked on one instance."""

    name: str = Field(max_length=80)
    statement: str = Field(max_length=300)
    status: CheckStatus
    detail: Optional[str] = Field(default=None)


class Report(SQLModel, table=False):
    """Computed values and check outcomes of one command on one instance."""

    command: str
    instance_digest: str
    instance_kind: str
    values: Dict[str, Any] = Field(default={})
    checks: List[CheckOutcome] = Field(default=[])
    wall_time: float = Field(default=0.0, ge=0)

    @property
    def failed(self) -> List[CheckOutcome]:
        return [c for c in self.checks if c.status == CheckStatus.FAIL]

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0


class RunSummary(SQLModel, table=False):
    """Schema for stored runs in listings."""

    id: int
    command: str
    instance_digest: str
    instance_kind: str
    exit_code: int
    wall_time: float
    created_at: str  # ISO format string
