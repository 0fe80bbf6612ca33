"""Tests for the shipped suites."""
import pytest

from indlift.backend.checkers import SIMPLE_AXIOMS
from indlift.backend.models import Axiom, VerdictStatus
from indlift.backend.suites import (
    axiom_checks,
    default_registry,
    predefined_suites,
    references,
    sigma_swap_request,
)
from indlift.backend.utils import canonical_dumps

SUITES = [s.name for s in predefined_suites()]


def test_axiom_checks_expectations():
    """Test that axiom checks expect to hold unless told otherwise."""
    checks = axiom_checks(
        "p", "fin-set/all/pullback", SIMPLE_AXIOMS, {Axiom.EXISTENCE: VerdictStatus.FAILS}
    )
    assert [c.key for c in checks][:2] == ["p:invariance", "p:monotonicity"]
    expect = {c.axiom: c.expect for c in checks}
    assert expect[Axiom.EXISTENCE] == VerdictStatus.FAILS
    assert expect[Axiom.SYMMETRY] == VerdictStatus.HOLDS


def test_sigma_swap_request_is_valid(registry):
    """Test that the swap request is a well-formed dimension-2 request."""
    request = sigma_swap_request()
    assert request.dimension == 2
    request.validate(
        registry.functor("sigma-graph-to-graph"), registry.relation("fin-graph/emb/pullback")
    )


def test_references_are_deduplicated():
    """Test that each referenced name is listed once, in first-use order."""
    config = default_registry().suite("semi-invariance-example")
    assert references(config) == ["fin-set/all/pullback"]


def test_theorem_suites_name_their_checks():
    """Test that every theorem refers to checks of its own suite."""
    for config in predefined_suites():
        if config.theorem is None:
            continue
        keys = {c.key for c in config.checks}
        assert set(config.theorem.hypothesis) <= keys
        assert set(config.theorem.conclusion) <= keys


def test_reports_are_deterministic(service):
    """Test that two runs of a suite render identical reports."""
    config = service.registry.suite("semi-invariance-example")
    first = canonical_dumps(service.run_suite(config).to_dict())
    second = canonical_dumps(service.run_suite(config).to_dict())
    assert first == second


@pytest.mark.slow
@pytest.mark.parametrize("name", SUITES)
def test_shipped_suite_meets_its_expectations(service, name):
    """Test that a shipped suite runs without errors, surprises or violations."""
    report = service.run_suite(service.registry.suite(name))
    assert report.errors == {}
    assert report.unexpected == []
    assert report.violations == []
