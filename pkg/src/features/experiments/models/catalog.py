from __future__ import annotations

from datetime import datetime, timezone
from typing import Any

from duckling import Document
from pydantic import Field
from ulid import ULID


def _new_ulid() -> str:
    return str(ULID())


def _now_utc() -> datetime:
    return datetime.now(timezone.utc)


class RunRecord(Document):
    id: str = Field(default_factory=_new_ulid)
    command: str
    n_scale: int | None = None
    master_seed: str
    config: dict[str, Any] | None = None
    version: str | None = None
    status: str
    exit_code: int
    wall_time: float
    output_dir: str
    created_at: datetime = Field(default_factory=_now_utc)

    class Settings:
        table_name = 'v1"."runs'


class VerdictRecord(Document):
    id: str = Field(default_factory=_new_ulid)
    run_id: str
    check_name: str
    statistic: str
    value: float
    target: float
    sigma: float
    passed: bool

    class Settings:
        table_name = 'v1"."verdicts'
