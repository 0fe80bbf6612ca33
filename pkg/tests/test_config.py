"""Tests for settings and suite configuration."""
import json

import pytest
from pydantic import ValidationError

from indlift.backend.config import (
    CHECK_KINDS,
    CheckSpec,
    Settings,
    SuiteConfig,
    Theorem,
    ensure_within_caps,
    load_settings,
    load_suite_config,
)
from indlift.backend.errors import ConfigError
from indlift.backend.models import Axiom, Scope, VerdictStatus

from conftest import INDLIFT_ENV


@pytest.fixture
def clean_env(monkeypatch):
    # recorded as unset, so variables loaded from .env files are removed at teardown
    for name in INDLIFT_ENV:
        monkeypatch.setenv(name, "")
        monkeypatch.delenv(name)
    return monkeypatch


def test_default_settings(clean_env, tmp_path):
    """Test the defaults when nothing is set."""
    settings = load_settings(tmp_path / "missing.env")
    assert settings == Settings()
    assert settings.max_object_size == 6
    assert settings.max_completion_size == 10
    assert not settings.include_timings


def test_settings_from_env_file(clean_env, tmp_path):
    """Test that a .env file feeds the INDLIFT_* variables."""
    env_file = tmp_path / ".env"
    env_file.write_text(
        "INDLIFT_MAX_OBJECT_SIZE=4\n"
        "INDLIFT_DISABLED=bil-to-vec, sigma-set\n"
        "INDLIFT_TIMINGS=yes\n"
    )
    settings = load_settings(env_file)
    assert settings.max_object_size == 4
    assert settings.disabled_instances == ["bil-to-vec", "sigma-set"]
    assert settings.include_timings


def test_environment_wins_over_env_file(clean_env, tmp_path):
    """Test that variables already set are not overridden by the file."""
    env_file = tmp_path / ".env"
    env_file.write_text("INDLIFT_MAX_HOMS=10\n")
    clean_env.setenv("INDLIFT_MAX_HOMS", "99")
    assert load_settings(env_file).max_homs == 99


@pytest.mark.parametrize(
    "name, value",
    [
        ("INDLIFT_MAX_OBJECT_SIZE", "three"),
        ("INDLIFT_MAX_HOMS", "0"),
        ("INDLIFT_TIMINGS", "maybe"),
    ],
)
def test_bad_settings(clean_env, tmp_path, name, value):
    """Test that malformed variables raise a configuration error."""
    clean_env.setenv(name, value)
    with pytest.raises(ConfigError):
        load_settings(tmp_path / "missing.env")


def test_check_spec_validation():
    """Test that kinds and dimensions are validated."""
    assert len(CHECK_KINDS) == 17
    spec = CheckSpec.model_validate(
        {"key": "k", "kind": "axiom", "relation": "r", "axiom": "symmetry", "expect": "fails"}
    )
    assert spec.axiom == Axiom.SYMMETRY
    assert spec.expect == VerdictStatus.FAILS
    with pytest.raises(ValidationError):
        CheckSpec.model_validate({"key": "k", "kind": "no-such-kind"})
    with pytest.raises(ValidationError):
        CheckSpec.model_validate({"key": "k", "kind": "completions", "dimension": 4})


def test_duplicate_check_keys():
    """Test that a suite cannot reuse a check key."""
    check = {"key": "same", "kind": "join-oracle", "category": "fin-set"}
    with pytest.raises(ValidationError):
        SuiteConfig.model_validate({"name": "twice", "checks": [check, check]})


def test_scope_for():
    """Test that a check scope overrides the suite scope."""
    own = Scope(max_object_size=1)
    config = SuiteConfig(
        name="s",
        checks=[
            CheckSpec(key="a", kind="join-oracle", category="fin-set"),
            CheckSpec(key="b", kind="join-oracle", category="fin-set", scope=own),
        ],
    )
    assert config.scope_for(config.checks[0]) == config.scope
    assert config.scope_for(config.checks[1]) == own


def test_ensure_within_caps():
    """Test that scopes beyond the caps are refused, including per-check scopes."""
    settings = Settings(max_object_size=3)
    ensure_within_caps(SuiteConfig(name="ok", scope=Scope(max_object_size=3)), settings)
    with pytest.raises(ConfigError):
        ensure_within_caps(SuiteConfig(name="big", scope=Scope(max_object_size=4)), settings)
    nested = SuiteConfig(
        name="nested",
        scope=Scope(max_object_size=2),
        checks=[
            CheckSpec(
                key="a", kind="join-oracle", category="fin-set", scope=Scope(max_object_size=5)
            )
        ],
    )
    with pytest.raises(ConfigError):
        ensure_within_caps(nested, settings)


def test_theorem_keys_must_exist():
    """Test that a theorem names checks of its own suite."""
    config = SuiteConfig(
        name="t",
        checks=[CheckSpec(key="a", kind="join-oracle", category="fin-set")],
        theorem=Theorem(hypothesis=["a"], conclusion=["b"]),
    )
    with pytest.raises(ConfigError) as info:
        ensure_within_caps(config, Settings())
    assert info.value.details["missing"] == ["b"]


def test_load_suite_config(tmp_path):
    """Test reading a suite config from disk."""
    path = tmp_path / "suite.json"
    path.write_text(
        json.dumps(
            {
                "name": "from-file",
                "format": "text",
                "scope": {"max_object_size": 2},
                "checks": [{"key": "a", "kind": "join-oracle", "category": "fin-set"}],
            }
        )
    )
    config = load_suite_config(path)
    assert config.name == "from-file"
    assert config.format == "text"
    assert config.scope.max_object_size == 2
    assert config.checks[0].kind == "join-oracle"


def test_load_suite_config_errors(tmp_path):
    """Test that missing, unparsable and invalid files raise configuration errors."""
    with pytest.raises(ConfigError):
        load_suite_config(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ConfigError):
        load_suite_config(broken)
    invalid = tmp_path / "invalid.json"
    invalid.write_text(json.dumps({"name": "x", "format": "yaml"}))
    with pytest.raises(ConfigError) as info:
        load_suite_config(invalid)
    assert info.value.details["errors"]
