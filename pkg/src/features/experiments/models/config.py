"""
Run configuration.

A flat key=value file (`#` comments and blank lines ignored) merged with `--key value` overrides.
Domain parameters use dotted keys: `domain=disc`, `domain.center=0,0`, `domain.radius=1`,
`domain.lower=0,0`, `domain.upper=1,1`, `domain.vertices=0,0;1,0;0,1`.
"""

from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import Any, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from config.settings import settings
from core.errors import ConfigError
from features.lattice.models.continuum import ContinuumDomain, Rectangle
from features.walk.models.profile import HoldingMode

MAX_SEED = 2**64 - 1


class Command(str, Enum):
    GREEN_CHECK = "green-check"
    SAMPLE_DGFF = "sample-dgff"
    THICK_POINTS = "thick-points"
    RUN_WALK = "run-walk"
    AVOIDED_POINTS = "avoided-points"
    LIGHT_POINTS = "light-points"
    VERIFY_ISOMORPHISM = "verify-isomorphism"
    COVER_TIME = "cover-time"
    REPORT_CONSTANTS = "report-constants"


# fields each command cannot run without; tuples mean "one of"
REQUIRED: dict[Command, list[str | tuple[str, ...]]] = {
    Command.GREEN_CHECK: ["N"],
    Command.SAMPLE_DGFF: ["N"],
    Command.THICK_POINTS: ["N", ("lam", "a")],
    Command.RUN_WALK: ["N", ("theta", "t")],
    Command.AVOIDED_POINTS: ["N", ("theta", "t")],
    Command.LIGHT_POINTS: ["N", ("theta", "t"), "b"],
    Command.VERIFY_ISOMORPHISM: ["N"],
    Command.COVER_TIME: ["N"],
    Command.REPORT_CONSTANTS: ["N"],
}

ALIASES = {"lambda": "lam", "seed": "master_seed"}


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True, use_enum_values=False)

    command: Command
    domain: ContinuumDomain = Field(default_factory=lambda: Rectangle())
    N: Optional[int] = Field(default=None, ge=1)
    lam: Optional[float] = Field(default=None, alias="lambda")
    theta: Optional[float] = None
    t: Optional[float] = Field(default=None, ge=0)
    a: Optional[float] = None
    b: Optional[float] = None
    replicas: int = Field(default=100, ge=1)
    master_seed: int = Field(default=0, ge=0, le=MAX_SEED)
    mode: HoldingMode = HoldingMode.EXPONENTIAL
    backend: Literal["auto", "dense", "sparse", "spectral"] = "auto"
    probes: int = Field(default=3, ge=1)
    emit: int = Field(default=4, ge=0)
    output_dir: Optional[str] = None
    threads: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _command_fields(self) -> RunConfig:
        for requirement in REQUIRED[self.command]:
            options = requirement if isinstance(requirement, tuple) else (requirement,)
            if all(getattr(self, name) is None for name in options):
                raise ValueError(f"missing:{'|'.join(options)}")
        return self

    @property
    def target_dir(self) -> Path:
        return Path(self.output_dir or settings.output_dir)

    def echo(self) -> dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)


def _numbers(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def _set(raw: dict[str, Any], key: str, value: str) -> None:
    key = key.strip().replace("-", "_")
    key = ALIASES.get(key, key)
    value = value.strip()
    if key == "domain":
        shape = {"square": "rectangle", "box": "rectangle"}.get(value, value)
        raw.setdefault("domain", {})["shape"] = shape
        return
    if key.startswith("domain."):
        field = key.split(".", 1)[1]
        domain = raw.setdefault("domain", {})
        if field == "vertices":
            domain[field] = [tuple(_numbers(v)) for v in value.split(";") if v.strip()]
        elif field == "radius":
            domain[field] = float(value)
        else:
            domain[field] = tuple(_numbers(value))
        return
    raw[key] = value


def parse_lines(lines: Sequence[str]) -> dict[str, Any]:
    raw: dict[str, Any] = {}
    for number, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {number}", f"expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        _set(raw, key, value)
    return raw


def parse_overrides(args: Sequence[str]) -> dict[str, Any]:
    """`--key value` and `--key=value` pairs."""
    raw: dict[str, Any] = {}
    items = list(args)
    i = 0
    while i < len(items):
        item = items[i]
        if not item.startswith("--"):
            raise ConfigError(item, "overrides must look like --key value")
        if "=" in item:
            key, value = item[2:].split("=", 1)
            i += 1
        else:
            if i + 1 >= len(items):
                raise ConfigError(item[2:], "missing value")
            key, value = item[2:], items[i + 1]
            i += 2
        _set(raw, key, value)
    return raw


def _merge(base: dict[str, Any], extra: dict[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in extra.items():
        if key == "domain" and isinstance(merged.get("domain"), dict):
            if "shape" in value and value["shape"] != merged["domain"].get("shape"):
                merged["domain"] = dict(value)
            else:
                merged["domain"] = {**merged["domain"], **value}
        else:
            merged[key] = value
    return merged


def build_run_config(raw: dict[str, Any]) -> RunConfig:
    try:
        return RunConfig.model_validate(raw)
    except ValidationError as e:
        error = e.errors()[0]
        message = str(error.get("msg", "invalid value"))
        if "missing:" in message:
            field = message.split("missing:", 1)[1]
            raise ConfigError(field, f"required by {raw.get('command')}") from e
        location = ".".join(str(part) for part in error.get("loc", ())) or "config"
        raise ConfigError(location, message) from e


def load_run_config(
    command: str, path: Optional[Path] = None, overrides: Sequence[str] = ()
) -> RunConfig:
    raw: dict[str, Any] = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError("config", f"cannot read {path}: {e}") from e
        raw = parse_lines(text.splitlines())
    raw = _merge(raw, parse_overrides(overrides))
    raw["command"] = command
    return build_run_config(raw)
