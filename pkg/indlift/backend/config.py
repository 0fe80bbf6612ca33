"""Settings and suite configuration."""
import logging
import os
from pathlib import Path
from typing import Dict, List, Literal, Optional, Union, get_args

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from indlift.backend.errors import ConfigError
from indlift.backend.models import Axiom, Scope, VerdictStatus
from indlift.backend.utils import read_json

logger = logging.getLogger(__name__)

CheckKind = Literal[
    "axiom",
    "reflects-amalgamation",
    "preserves-joins",
    "completions",
    "completion",
    "completion-implication",
    "horn-amalgamation",
    "lift-law",
    "multiadjoint",
    "emergent-strong-3-amalgamation",
    "join-base-monotonicity",
    "join-oracle",
    "extensional",
    "cross-check-basic-existence",
    "lifting-basic-properties",
    "audit-class",
    "audit-functor",
]
CHECK_KINDS = get_args(CheckKind)


class Settings(BaseModel):
    """Global caps and switches."""

    model_config = ConfigDict(frozen=True)

    max_object_size: int = Field(6, gt=0)
    max_completion_size: int = Field(10, gt=0)
    max_homs: int = Field(200_000, gt=0)
    disabled_instances: List[str] = Field(default_factory=list)
    include_timings: bool = False


def _errors(exc: ValidationError) -> List[Dict]:
    return [dict(e) for e in exc.errors(include_url=False, include_context=False)]


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{name} must be an integer", {"value": raw}) from exc


def _env_bool(name: str) -> bool:
    raw = os.environ.get(name, "").strip().lower()
    if raw in ("", "0", "false", "no", "off"):
        return False
    if raw in ("1", "true", "yes", "on"):
        return True
    raise ConfigError(f"{name} must be a boolean", {"value": raw})


def load_settings(env_file: Optional[Union[str, Path]] = None) -> Settings:
    """Read INDLIFT_* variables, after loading an optional .env file."""
    load_dotenv(env_file)
    disabled = [
        name.strip()
        for name in os.environ.get("INDLIFT_DISABLED", "").split(",")
        if name.strip()
    ]
    try:
        settings = Settings(
            max_object_size=_env_int("INDLIFT_MAX_OBJECT_SIZE", 6),
            max_completion_size=_env_int("INDLIFT_MAX_COMPLETION_SIZE", 10),
            max_homs=_env_int("INDLIFT_MAX_HOMS", 200_000),
            disabled_instances=disabled,
            include_timings=_env_bool("INDLIFT_TIMINGS"),
        )
    except ValidationError as exc:
        raise ConfigError("invalid settings", {"errors": _errors(exc)}) from exc
    logger.debug("settings: %s", settings)
    return settings


class CheckSpec(BaseModel):
    """One check of a suite, addressed by registry names."""

    model_config = ConfigDict(frozen=True)

    key: str
    kind: CheckKind
    relation: Optional[str] = None
    second_relation: Optional[str] = None
    functor: Optional[str] = None
    second_functor: Optional[str] = None
    category: Optional[str] = None
    morphism_class: Optional[str] = None
    system: Optional[str] = None
    axiom: Optional[Axiom] = None
    dimension: Optional[int] = Field(None, ge=1, le=3)
    request: Optional[Dict] = None
    expect: Optional[VerdictStatus] = None
    scope: Optional[Scope] = None


class Theorem(BaseModel):
    """Hypothesis and conclusion check keys of a theorem suite."""

    model_config = ConfigDict(frozen=True)

    hypothesis: List[str]
    conclusion: List[str]


class SuiteConfig(BaseModel):
    """A named list of checks with a scope and output options."""

    model_config = ConfigDict(frozen=True)

    name: str
    checks: List[CheckSpec] = Field(default_factory=list)
    scope: Scope = Field(default_factory=Scope)
    out: Optional[str] = None
    format: Literal["json", "text"] = "json"
    theorem: Optional[Theorem] = None
    description: str = ""

    @field_validator("checks")
    @classmethod
    def _unique_keys(cls, checks: List[CheckSpec]) -> List[CheckSpec]:
        keys = [c.key for c in checks]
        if len(keys) != len(set(keys)):
            raise ValueError("check keys must be unique")
        return checks

    def scope_for(self, spec: CheckSpec) -> Scope:
        return spec.scope or self.scope


def ensure_within_caps(config: SuiteConfig, settings: Settings) -> None:
    """Every scope of the suite stays within the global caps."""
    scopes = [config.scope] + [c.scope for c in config.checks if c.scope is not None]
    for scope in scopes:
        if (
            scope.max_object_size > settings.max_object_size
            or scope.max_completion_size > settings.max_completion_size
            or scope.max_homs > settings.max_homs
        ):
            raise ConfigError(
                "scope exceeds the configured caps",
                {"scope": scope.to_dict(), "caps": settings.model_dump()},
            )
    if config.theorem is not None:
        keys = {c.key for c in config.checks}
        named = config.theorem.hypothesis + config.theorem.conclusion
        missing = [k for k in named if k not in keys]
        if missing:
            raise ConfigError("theorem refers to unknown checks", {"missing": missing})


def load_suite_config(path: Union[str, Path]) -> SuiteConfig:
    """Parse a suite configuration from a JSON file."""
    try:
        payload = read_json(path)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read suite config {path}", {"error": str(exc)}) from exc
    try:
        return SuiteConfig.model_validate(payload)
    except ValidationError as exc:
        raise ConfigError("invalid suite config", {"errors": _errors(exc)}) from exc
