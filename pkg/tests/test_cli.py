"""Tests for the command line."""
import json
from pathlib import Path

import pytest

from indlift import __version__
from indlift.frontend.cli import EXIT_ERROR, EXIT_OK, EXIT_UNEXPECTED, main

from conftest import INDLIFT_ENV

FIXTURES = Path(__file__).resolve().parent.parent / "indlift" / "fixtures"


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    """Run every command from an empty directory with no INDLIFT_* variables."""
    monkeypatch.chdir(tmp_path)
    for name in INDLIFT_ENV:
        monkeypatch.setenv(name, "")
        monkeypatch.delenv(name)


def test_version(capsys):
    """Test that --version prints the package version and exits."""
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_a_subcommand_is_required():
    """Test that argparse rejects a bare invocation."""
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2


def test_list(capsys):
    """Test the text catalogue."""
    assert main(["list"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("categories:\n")
    assert "  graph-to-set\n" in out


def test_list_json(capsys):
    """Test the JSON catalogue."""
    assert main(["list", "--format", "json"]) == EXIT_OK
    catalogue = json.loads(capsys.readouterr().out)
    assert {s["name"] for s in catalogue["suites"]} >= {"empty", "lift-laws"}


def test_run_empty_suite(capsys):
    """Test that the empty suite succeeds."""
    assert main(["run", "--suite", "empty"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["suite"] == "empty"


def test_run_unknown_suite(capsys):
    """Test that an unknown suite is reported as an error on stderr."""
    assert main(["run", "--suite", "no-such-suite"]) == EXIT_ERROR
    error = json.loads(capsys.readouterr().err)
    assert error["error"] == "ResolutionError"
    assert "empty" in error["details"]["known"]


def test_run_to_a_file(tmp_path, capsys):
    """Test a text report written to a path at a smaller scope."""
    out = tmp_path / "report.txt"
    code = main(
        [
            "run",
            "--suite",
            "semi-invariance-example",
            "--scope-size",
            "2",
            "--format",
            "text",
            "--out",
            str(out),
        ]
    )
    assert code == EXIT_OK
    assert capsys.readouterr().out == ""
    assert "all-maps:invariance: fails" in out.read_text()


def test_run_config_with_unexpected_result(tmp_path):
    """Test that a verdict against its expectation exits with one."""
    config = tmp_path / "suite.json"
    config.write_text(
        json.dumps(
            {
                "name": "wrong",
                "scope": {"max_object_size": 1, "max_completion_size": 3},
                "checks": [
                    {
                        "key": "sym",
                        "kind": "axiom",
                        "relation": "fin-set/inj/pullback",
                        "axiom": "symmetry",
                        "expect": "fails",
                    }
                ],
            }
        )
    )
    assert main(["run", "--config", str(config)]) == EXIT_UNEXPECTED


def test_run_config_with_capability_error(tmp_path):
    """Test that a check the relation cannot support exits with two."""
    config = tmp_path / "suite.json"
    config.write_text(
        json.dumps(
            {
                "name": "general",
                "scope": {"max_object_size": 1, "max_completion_size": 3},
                "checks": [
                    {
                        "key": "trans",
                        "kind": "axiom",
                        "relation": "fin-set/all/pullback",
                        "axiom": "transitivity",
                    }
                ],
            }
        )
    )
    assert main(["run", "--config", str(config)]) == EXIT_ERROR


def test_scope_beyond_caps(tmp_path):
    """Test that the env file caps apply to the command line scope."""
    env_file = tmp_path / "caps.env"
    env_file.write_text("INDLIFT_MAX_OBJECT_SIZE=2\n")
    code = main(["--env-file", str(env_file), "run", "--suite", "empty", "--scope-size", "5"])
    assert code == EXIT_ERROR


def test_replay_by_name(capsys):
    """Test replaying a shipped fixture by its name."""
    assert main(["replay", "semi-invariance"]) == EXIT_OK
    assert capsys.readouterr().out == "semi-invariance.json: fails reproduced\n"


def test_replay_mismatch(tmp_path, capsys):
    """Test that a fixture that no longer reproduces exits with one."""
    payload = json.loads((FIXTURES / "sigma-graph-completion.json").read_text())
    payload["verdict"]["certificate"]["reason"] = "something-else"
    path = tmp_path / "changed.json"
    path.write_text(json.dumps(payload))
    assert main(["replay", str(path)]) == EXIT_UNEXPECTED
    assert "changed.json: mismatch" in capsys.readouterr().out


def test_replay_without_fixtures():
    """Test that replay needs at least one fixture."""
    assert main(["replay"]) == EXIT_ERROR


@pytest.mark.slow
def test_replay_all(capsys):
    """Test that every shipped fixture reproduces."""
    assert main(["replay", "--all"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == len(list(FIXTURES.glob("*.json")))
    assert all(line.endswith("reproduced") for line in lines)
