"""Services that run suites, replay fixtures and describe the registry."""
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

from indlift import __version__
from indlift.backend.checkers import (
    audit_class,
    check_axiom,
    check_extensional_identity,
    check_join_base_monotonicity,
    check_join_oracle,
    check_strong_from_three,
    classify_verdicts,
    cross_check_basic_existence,
    replay_witness,
)
from indlift.backend.config import CheckSpec, Settings, SuiteConfig, ensure_within_caps
from indlift.backend.errors import (
    CapabilityError,
    ConfigError,
    ContractError,
    ReplayMismatchError,
    ResolutionError,
)
from indlift.backend.functors import audit_functor
from indlift.backend.lifting import (
    CompletionRequest,
    check_completions,
    check_horn_amalgamation,
    check_lifting_basic_properties,
    check_multiadjoint,
    check_reflects_amalgamation,
    completion_implication_check,
    compose_lift_law_check,
    find_completion,
    preserves_joins_check,
)
from indlift.backend.models import Axiom, Scope, Verdict, VerdictStatus
from indlift.backend.registry import InstanceRegistry
from indlift.backend.suites import default_registry, references
from indlift.backend.utils import read_json

logger = logging.getLogger(__name__)


def _need(spec: CheckSpec, *names: str) -> None:
    missing = [n for n in names if getattr(spec, n) is None]
    if missing:
        raise ConfigError(
            f"check {spec.key} ({spec.kind}) needs {', '.join(missing)}", {"key": spec.key}
        )


def run_check(spec: CheckSpec, registry: InstanceRegistry, scope: Scope) -> Verdict:
    """Resolve a check's references and run it at the given scope."""
    kind = spec.kind
    if kind == "axiom":
        _need(spec, "relation", "axiom")
        assert spec.axiom is not None
        return check_axiom(registry.relation(spec.relation), Axiom(spec.axiom), scope)
    if kind in ("emergent-strong-3-amalgamation", "join-base-monotonicity", "cross-check-basic-existence"):
        _need(spec, "relation")
        relation_checks: Dict[str, Callable[..., Verdict]] = {
            "emergent-strong-3-amalgamation": check_strong_from_three,
            "join-base-monotonicity": check_join_base_monotonicity,
            "cross-check-basic-existence": cross_check_basic_existence,
        }
        return relation_checks[kind](registry.relation(spec.relation), scope)
    if kind == "extensional":
        _need(spec, "relation", "second_relation")
        return check_extensional_identity(
            registry.relation(spec.relation), registry.relation(spec.second_relation), scope
        )
    if kind in ("reflects-amalgamation", "preserves-joins", "multiadjoint", "audit-functor"):
        _need(spec, "functor")
        functor_checks: Dict[str, Callable[..., Verdict]] = {
            "reflects-amalgamation": check_reflects_amalgamation,
            "preserves-joins": preserves_joins_check,
            "multiadjoint": check_multiadjoint,
            "audit-functor": audit_functor,
        }
        return functor_checks[kind](registry.functor(spec.functor), scope)
    if kind in ("completion-implication", "horn-amalgamation", "lifting-basic-properties"):
        _need(spec, "functor", "relation")
        lift_checks: Dict[str, Callable[..., Verdict]] = {
            "completion-implication": completion_implication_check,
            "horn-amalgamation": check_horn_amalgamation,
            "lifting-basic-properties": check_lifting_basic_properties,
        }
        return lift_checks[kind](
            registry.functor(spec.functor), registry.relation(spec.relation), scope
        )
    if kind == "completions":
        _need(spec, "functor", "relation")
        return check_completions(
            registry.functor(spec.functor),
            registry.relation(spec.relation),
            scope,
            spec.dimension or 2,
        )
    if kind == "completion":
        _need(spec, "functor", "relation", "request")
        assert spec.request is not None
        return find_completion(
            registry.functor(spec.functor),
            registry.relation(spec.relation),
            CompletionRequest.from_dict(spec.request),
            scope,
        )
    if kind == "lift-law":
        _need(spec, "functor", "second_functor", "relation")
        return compose_lift_law_check(
            registry.functor(spec.functor),
            registry.functor(spec.second_functor),
            registry.relation(spec.relation),
            scope,
        )
    if kind == "join-oracle":
        _need(spec, "category")
        return check_join_oracle(registry.category(spec.category), scope, spec.system)
    if kind == "audit-class":
        _need(spec, "category")
        cat = registry.category(spec.category)
        return audit_class(cat, cat.morphism_class(spec.morphism_class), scope)
    raise ConfigError(f"unknown check kind {kind!r}")


@dataclass
class SuiteReport:
    """Verdicts of one suite run, with classifications and findings."""

    suite: str
    scope: Scope
    verdicts: Dict[str, Verdict] = field(default_factory=dict)
    expected: Dict[str, VerdictStatus] = field(default_factory=dict)
    errors: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    classifications: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    findings: List[Dict[str, Any]] = field(default_factory=list)
    version: str = __version__

    @property
    def unexpected(self) -> List[Dict[str, str]]:
        """Checks whose status differs from the declared expectation."""
        found = []
        for key in sorted(self.expected):
            verdict = self.verdicts.get(key)
            actual = verdict.status.value if verdict else "error"
            if actual != self.expected[key].value:
                found.append({"key": key, "expected": self.expected[key].value, "actual": actual})
        return found

    @property
    def violations(self) -> List[Dict[str, Any]]:
        return [f for f in self.findings if f["severity"] == "high"]

    @property
    def ok(self) -> bool:
        """No errors, no unexpected verdicts and no theorem violations."""
        return not (self.errors or self.unexpected or self.violations)

    def to_dict(self) -> Dict[str, Any]:
        """Convert the report to a dictionary for serialization."""
        return {
            "suite": self.suite,
            "version": self.version,
            "scope": self.scope.to_dict(),
            "checks": [
                {"key": key, **self.verdicts[key].to_dict()} for key in sorted(self.verdicts)
            ],
            "errors": {key: self.errors[key] for key in sorted(self.errors)},
            "classifications": {
                name: self.classifications[name] for name in sorted(self.classifications)
            },
            "unexpected": self.unexpected,
            "findings": list(self.findings),
        }

    def render_text(self) -> str:
        """A plain text summary, one line per check."""
        lines = [f"suite {self.suite} (indlift {self.version})"]
        for key in sorted(self.verdicts):
            verdict = self.verdicts[key]
            mark = "" if key not in self.expected or verdict.status == self.expected[key] else "  !"
            lines.append(f"  {key}: {verdict.status.value} [{verdict.obligations}]{mark}")
        for key in sorted(self.errors):
            lines.append(f"  {key}: error {self.errors[key]['error']}: {self.errors[key]['message']}")
        for name in sorted(self.classifications):
            lines.append(f"  {name}: {self.classifications[name]['classification']}")
        for finding in self.findings:
            lines.append(f"  [{finding['severity']}] {finding['message']}")
        return "\n".join(lines) + "\n"


def _classify(report: SuiteReport, config: SuiteConfig) -> None:
    statuses: Dict[str, Dict[Axiom, VerdictStatus]] = {}
    for spec in config.checks:
        if spec.kind != "axiom" or spec.key not in report.verdicts:
            continue
        assert spec.relation is not None and spec.axiom is not None
        statuses.setdefault(spec.relation, {})[Axiom(spec.axiom)] = report.verdicts[spec.key].status
    for relation, vector in statuses.items():
        report.classifications[relation] = classify_verdicts(vector, config.scope.chain_length)


def _theorem_findings(report: SuiteReport, config: SuiteConfig) -> None:
    theorem = config.theorem
    if theorem is None:
        return

    def status(key: str) -> Optional[VerdictStatus]:
        verdict = report.verdicts.get(key)
        return verdict.status if verdict else None

    if not all(status(k) == VerdictStatus.HOLDS for k in theorem.hypothesis):
        report.findings.append(
            {"severity": "info", "message": "hypothesis not verified; implication vacuous"}
        )
        return
    for key in theorem.conclusion:
        if status(key) == VerdictStatus.FAILS:
            report.findings.append(
                {
                    "severity": "high",
                    "message": f"theorem violated: hypothesis holds but {key} fails",
                    "key": key,
                }
            )
        elif status(key) != VerdictStatus.HOLDS:
            report.findings.append(
                {"severity": "low", "message": f"conclusion {key} not verified", "key": key}
            )


class SuiteService:
    """Runs suites against a registry."""

    def __init__(
        self, registry: Optional[InstanceRegistry] = None, settings: Optional[Settings] = None
    ) -> None:
        """Initialize the service, building the default registry when none is given."""
        self.settings = settings or Settings()
        self.registry = registry or default_registry(self.settings)

    def resolve(self, config: SuiteConfig) -> None:
        """Check that every reference of the suite is registered."""
        known = (
            set(self.registry.categories)
            | set(self.registry.functors)
            | set(self.registry.relations)
        )
        missing = [n for n in references(config) if n not in known]
        if missing:
            raise ResolutionError(
                f"suite {config.name} refers to unknown entries", {"missing": missing}
            )

    def run_suite(self, config: SuiteConfig) -> SuiteReport:
        """Run every check of the suite; capability problems are reported per check."""
        ensure_within_caps(config, self.settings)
        self.resolve(config)
        report = SuiteReport(config.name, config.scope)
        for spec in config.checks:
            if spec.expect is not None:
                report.expected[spec.key] = spec.expect
            started = time.perf_counter()
            try:
                verdict = run_check(spec, self.registry, config.scope_for(spec))
            except (CapabilityError, ContractError) as exc:
                logger.warning("check %s not run: %s", spec.key, exc)
                report.errors[spec.key] = {
                    "error": type(exc).__name__,
                    "message": str(exc),
                    "details": exc.details,
                }
                continue
            if self.settings.include_timings:
                verdict.elapsed = time.perf_counter() - started
            report.verdicts[spec.key] = verdict
        _classify(report, config)
        _theorem_findings(report, config)
        logger.info(
            "suite %s: %d checks, %d unexpected, %d errors",
            config.name,
            len(report.verdicts),
            len(report.unexpected),
            len(report.errors),
        )
        return report

    def replay_fixture(self, path: Union[str, Path]) -> Verdict:
        """Re-check a stored verdict; the replayed status must match the stored one."""
        try:
            payload = read_json(path)
            spec = CheckSpec.model_validate(payload["spec"])
            stored = Verdict.from_dict(payload["verdict"])
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"cannot parse fixture {path}", {"error": str(exc)}) from exc
        if stored.status == VerdictStatus.FAILS and spec.kind == "axiom" and stored.witness:
            assert spec.relation is not None
            replayed = replay_witness(self.registry.relation(spec.relation), stored)
        else:
            replayed = run_check(spec, self.registry, stored.scope)
        mismatch = replayed.status != stored.status
        stored_reason = (stored.certificate or {}).get("reason")
        if not mismatch and stored_reason is not None:
            mismatch = (replayed.certificate or {}).get("reason") != stored_reason
        if mismatch:
            raise ReplayMismatchError(
                f"fixture {Path(path).name} no longer reproduces",
                {"stored": stored.to_dict(), "replayed": replayed.to_dict()},
            )
        logger.info("fixture %s reproduced: %s", Path(path).name, replayed.status)
        return replayed

    def list_registry(self) -> Dict[str, List[Dict[str, Any]]]:
        """The registry catalogue."""
        return self.registry.catalogue()


def run_suite(
    config: SuiteConfig,
    registry: Optional[InstanceRegistry] = None,
    settings: Optional[Settings] = None,
) -> SuiteReport:
    """Run a suite with a fresh service."""
    return SuiteService(registry, settings).run_suite(config)


def replay_fixture(
    path: Union[str, Path],
    registry: Optional[InstanceRegistry] = None,
    settings: Optional[Settings] = None,
) -> Verdict:
    """Replay a fixture with a fresh service."""
    return SuiteService(registry, settings).replay_fixture(path)


def list_registry(
    registry: Optional[InstanceRegistry] = None, settings: Optional[Settings] = None
) -> Dict[str, List[Dict[str, Any]]]:
    """The catalogue of the default or given registry."""
    return SuiteService(registry, settings).list_registry()


