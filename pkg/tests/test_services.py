"""Tests for suite runs, fixture replay and the registry listing."""
import json
from pathlib import Path

import pytest

from indlift.backend.config import CheckSpec, Settings, SuiteConfig, Theorem
from indlift.backend.errors import (
    ConfigError,
    ReplayMismatchError,
    ResolutionError,
)
from indlift.backend.models import Axiom, Scope, VerdictStatus
from indlift.backend.services import (
    SuiteService,
    list_registry,
    replay_fixture,
    run_check,
    run_suite,
)
from indlift.backend.suites import predefined_suites, references

FIXTURES = Path(__file__).resolve().parent.parent / "indlift" / "fixtures"

HOLDS = VerdictStatus.HOLDS
FAILS = VerdictStatus.FAILS
TINY = Scope(max_object_size=1, max_completion_size=3)


def axiom(key, relation, which, expect=None):
    return CheckSpec(key=key, kind="axiom", relation=relation, axiom=which, expect=expect)


def test_predefined_suites():
    """Test the shipped suite names and that every suite resolves."""
    names = [s.name for s in predefined_suites()]
    assert names == sorted(names)
    assert {"empty", "semi-invariance-example", "sigma-graph-completion"} <= set(names)


def test_shipped_suites_resolve(service):
    """Test that every shipped suite refers only to registered entries."""
    for config in predefined_suites():
        service.resolve(config)


def test_empty_suite(service):
    """Test that a suite without checks reports success."""
    report = service.run_suite(service.registry.suite("empty"))
    assert report.ok
    assert report.to_dict()["checks"] == []
    assert report.render_text().startswith("suite empty (indlift ")


def test_semi_invariance_suite(service):
    """Test the shipped suite where invariance is expected to fail."""
    report = service.run_suite(service.registry.suite("semi-invariance-example"))
    assert report.ok
    assert report.verdicts["all-maps:invariance"].status == FAILS
    assert report.verdicts["all-maps:semi-invariance"].status == HOLDS
    assert "fin-set/all/pullback" in report.classifications


@pytest.mark.slow
def test_sigma_graph_suite(service):
    """Test that the swapped pairs block completions along the reduct."""
    report = service.run_suite(service.registry.suite("sigma-graph-completion"))
    assert report.ok
    assert report.verdicts["swap-completion"].certificate["reason"] == "endomorphism-edge"


def test_unexpected_verdicts(service):
    """Test that a verdict against its expectation is reported and marked."""
    config = SuiteConfig(
        name="wrong-guess",
        scope=TINY,
        checks=[axiom("sym", "fin-set/inj/pullback", Axiom.SYMMETRY, FAILS)],
    )
    report = service.run_suite(config)
    assert not report.ok
    assert report.unexpected == [
        {"key": "sym", "expected": FAILS.value, "actual": HOLDS.value}
    ]
    assert "sym: holds-within-scope" in report.render_text()
    assert report.render_text().count("!") == 1


def test_capability_errors_are_reported_per_check(service):
    """Test that an unsupported axiom becomes an error entry, not an exception."""
    config = SuiteConfig(
        name="general",
        scope=TINY,
        checks=[
            axiom("trans", "fin-set/all/pullback", Axiom.TRANSITIVITY),
            axiom("sym", "fin-set/all/pullback", Axiom.SYMMETRY),
        ],
    )
    report = service.run_suite(config)
    assert report.errors["trans"]["error"] == "CapabilityError"
    assert report.verdicts["sym"].status == HOLDS
    assert not report.ok


def test_theorem_violation(service):
    """Test that a failing conclusion under a verified hypothesis is a violation."""
    config = SuiteConfig(
        name="false-theorem",
        scope=Scope(max_object_size=2, max_completion_size=4),
        checks=[
            axiom("hyp", "fin-set/all/pullback", Axiom.SEMI_INVARIANCE),
            axiom("concl", "fin-set/all/pullback", Axiom.INVARIANCE),
        ],
        theorem=Theorem(hypothesis=["hyp"], conclusion=["concl"]),
    )
    report = service.run_suite(config)
    assert [f["key"] for f in report.violations] == ["concl"]
    assert not report.ok


def test_vacuous_theorem(service):
    """Test that a failing hypothesis only yields an informational finding."""
    config = SuiteConfig(
        name="vacuous",
        scope=Scope(max_object_size=2, max_completion_size=4),
        checks=[
            axiom("hyp", "fin-set/all/pullback", Axiom.INVARIANCE),
            axiom("concl", "fin-set/all/pullback", Axiom.SYMMETRY),
        ],
        theorem=Theorem(hypothesis=["hyp"], conclusion=["concl"]),
    )
    report = service.run_suite(config)
    assert [f["severity"] for f in report.findings] == ["info"]
    assert report.ok


def test_unknown_references(service):
    """Test that a suite naming unknown entries does not run."""
    config = SuiteConfig(
        name="dangling", checks=[axiom("a", "no-such-relation", Axiom.SYMMETRY)]
    )
    assert references(config) == ["no-such-relation"]
    with pytest.raises(ResolutionError) as info:
        service.run_suite(config)
    assert info.value.details["missing"] == ["no-such-relation"]


def test_scope_caps(service):
    """Test that a suite scope beyond the caps is refused."""
    config = SuiteConfig(name="huge", scope=Scope(max_object_size=50))
    with pytest.raises(ConfigError):
        service.run_suite(config)


def test_run_check_needs_its_fields(registry):
    """Test that a check missing a reference is a configuration error."""
    with pytest.raises(ConfigError):
        run_check(CheckSpec(key="a", kind="axiom"), registry, TINY)
    with pytest.raises(ConfigError):
        run_check(CheckSpec(key="b", kind="lift-law", functor="graph-to-set"), registry, TINY)


def test_timings(registry):
    """Test that timings are recorded only when switched on."""
    config = SuiteConfig(
        name="timed", scope=TINY, checks=[axiom("sym", "fin-set/inj/pullback", Axiom.SYMMETRY)]
    )
    untimed = run_suite(config, registry)
    assert untimed.verdicts["sym"].elapsed is None
    timed = run_suite(config, registry, Settings(include_timings=True))
    assert "seconds" in timed.to_dict()["checks"][0]["timing"]


@pytest.mark.parametrize("name", ["semi-invariance", "sigma-graph-completion"])
def test_replay_fixture(service, name):
    """Test that the shipped failing fixtures reproduce."""
    verdict = service.replay_fixture(FIXTURES / f"{name}.json")
    assert verdict.status == FAILS


@pytest.mark.slow
def test_replay_identity_lift(registry):
    """Test that the identity lift fixture reproduces."""
    verdict = replay_fixture(FIXTURES / "identity-lift.json", registry)
    assert verdict.status == HOLDS


def test_tampered_status_is_a_mismatch(service, tmp_path):
    """Test that a fixture claiming the wrong status does not replay."""
    payload = json.loads((FIXTURES / "semi-invariance.json").read_text())
    payload["verdict"]["status"] = HOLDS.value
    payload["verdict"]["witness"] = None
    path = tmp_path / "tampered.json"
    path.write_text(json.dumps(payload))
    with pytest.raises(ReplayMismatchError) as info:
        service.replay_fixture(path)
    assert info.value.details["replayed"]["status"] == FAILS.value


def test_tampered_reason_is_a_mismatch(service, tmp_path):
    """Test that a stored failure reason must match as well."""
    payload = json.loads((FIXTURES / "sigma-graph-completion.json").read_text())
    payload["verdict"]["certificate"]["reason"] = "something-else"
    path = tmp_path / "tampered.json"
    path.write_text(json.dumps(payload))
    with pytest.raises(ReplayMismatchError):
        service.replay_fixture(path)


def test_unreadable_fixture(service, tmp_path):
    """Test that missing and malformed fixtures are configuration errors."""
    with pytest.raises(ConfigError):
        service.replay_fixture(tmp_path / "missing.json")
    path = tmp_path / "empty.json"
    path.write_text("{}")
    with pytest.raises(ConfigError):
        service.replay_fixture(path)


def test_list_registry(registry):
    """Test that the listing is the registry catalogue."""
    catalogue = list_registry(registry)
    assert catalogue == registry.catalogue()
    assert isinstance(SuiteService(registry).list_registry()["functors"], list)
