"""The shipped suites, including the theorem suites checked as implications."""
import logging
from typing import Dict, Iterable, List, Optional, Sequence

from indlift.backend.checkers import SIMPLE_AXIOMS
from indlift.backend.config import CheckSpec, Settings, SuiteConfig, Theorem
from indlift.backend.lifting import CompletionRequest
from indlift.backend.models import (
    Axiom,
    Cospan,
    Scope,
    Span,
    StructData,
    StructKind,
    StructMorphism,
    StructObject,
    VerdictStatus,
)
from indlift.backend.registry import InstanceRegistry, build_registry

logger = logging.getLogger(__name__)

HOLDS = VerdictStatus.HOLDS
FAILS = VerdictStatus.FAILS

SET_PULLBACK = "fin-set/inj/pullback"
GRAPH_PULLBACK = "fin-graph/emb/pullback"
LIN = "fin-vec-2/inj/lin"
FORM_ZERO = "fin-binfunc-2/mono/form-zero"


def axiom_checks(
    prefix: str,
    relation: str,
    axioms: Iterable[Axiom] = tuple(Axiom),
    expect: Optional[Dict[Axiom, Optional[VerdictStatus]]] = None,
) -> List[CheckSpec]:
    """One axiom check per axiom, expected to hold unless listed otherwise."""
    expect = expect or {}
    return [
        CheckSpec(
            key=f"{prefix}:{axiom.value}",
            kind="axiom",
            relation=relation,
            axiom=axiom,
            expect=expect.get(axiom, HOLDS),
        )
        for axiom in axioms
    ]


def _keys(checks: Sequence[CheckSpec]) -> List[str]:
    return [c.key for c in checks]


def sigma_swap_request() -> CompletionRequest:
    """Two swapped pairs over the empty sigma-graph, joined by a single edge a1-b1."""

    def sigma(*names: str) -> StructObject:
        swapped = tuple(reversed(names)) if names else ()
        return StructObject(StructKind.SIGMA_GRAPH, names, StructData(endo=swapped))

    def graph(names, edges=()) -> StructObject:
        return StructObject(
            StructKind.GRAPH, tuple(names), StructData(edges=frozenset(frozenset(e) for e in edges))
        )

    base, a, b = sigma(), sigma("a1", "a2"), sigma("b1", "b2")
    d = graph(("a1", "a2", "b1", "b2"), [("a1", "b1")])
    span = Span(StructMorphism(base, a, ()), StructMorphism(base, b, ()))
    cocone = Cospan(
        StructMorphism(graph(a.carrier), d, ("a1", "a2")),
        StructMorphism(graph(b.carrier), d, ("b1", "b2")),
    )
    return CompletionRequest(2, span=span, cocone=cocone)


def _finset_mono_stable() -> SuiteConfig:
    checks = axiom_checks("pullback", SET_PULLBACK) + [
        CheckSpec(key="audit:inj", kind="audit-class", category="fin-set", morphism_class="inj"),
        CheckSpec(key="cross-check", kind="cross-check-basic-existence", relation=SET_PULLBACK),
        CheckSpec(
            key="emergent-strong",
            kind="emergent-strong-3-amalgamation",
            relation=SET_PULLBACK,
            scope=Scope(max_object_size=3, max_completion_size=6),
        ),
        CheckSpec(key="join-base-monotonicity", kind="join-base-monotonicity", relation=SET_PULLBACK),
    ]
    return SuiteConfig(
        name="finset-mono-stable",
        checks=checks,
        scope=Scope(max_object_size=4, max_completion_size=8),
        description="pullback squares of finite sets and injections",
    )


def _graph_lift() -> SuiteConfig:
    lifted = f"lift(graph-to-set, {SET_PULLBACK})"
    small = Scope(max_object_size=2, max_completion_size=4)
    checks = axiom_checks("lift", lifted, expect={Axiom.UNIQUENESS: FAILS}) + [
        CheckSpec(
            key="equals-graph-pullback",
            kind="extensional",
            relation=lifted,
            second_relation=GRAPH_PULLBACK,
            expect=HOLDS,
        ),
        CheckSpec(
            key="reflects-amalgamation",
            kind="reflects-amalgamation",
            functor="graph-to-set",
            expect=FAILS,
            scope=small,
        ),
        CheckSpec(
            key="horn-amalgamation",
            kind="horn-amalgamation",
            functor="graph-to-set",
            relation=SET_PULLBACK,
            expect=HOLDS,
            scope=small,
        ),
    ]
    return SuiteConfig(
        name="graph-lift",
        checks=checks,
        scope=Scope(max_object_size=4, max_completion_size=6),
        description="vertex-set pullbacks lifted to graphs and embeddings",
    )


def _semi_invariance_example() -> SuiteConfig:
    checks = axiom_checks(
        "all-maps",
        "fin-set/all/pullback",
        (Axiom.INVARIANCE, Axiom.SEMI_INVARIANCE),
        {Axiom.INVARIANCE: FAILS},
    )
    return SuiteConfig(
        name="semi-invariance-example",
        checks=checks,
        scope=Scope(max_object_size=2, max_completion_size=4),
        description="pullbacks along arbitrary functions are semi-invariant only",
    )


def _bil_uniqueness() -> SuiteConfig:
    joint = f"meet(lift(bil-to-vec, {LIN}), lift(bil-to-binfunc, {FORM_ZERO}))"
    small = Scope(max_object_size=2, max_completion_size=4)
    checks = [
        CheckSpec(
            key="star:uniqueness",
            kind="axiom",
            relation="fin-bil-2/emb/star",
            axiom=Axiom.UNIQUENESS,
            expect=HOLDS,
        ),
        CheckSpec(
            key="lin:uniqueness",
            kind="axiom",
            relation="fin-bil-2/emb/lin",
            axiom=Axiom.UNIQUENESS,
            expect=FAILS,
        ),
        CheckSpec(
            key="star-is-joint-lift",
            kind="extensional",
            relation="fin-bil-2/emb/star",
            second_relation=joint,
            expect=HOLDS,
        ),
        CheckSpec(
            key="joint-lift-is-product-lift",
            kind="extensional",
            relation=joint,
            second_relation=f"lift(<bil-to-vec, bil-to-binfunc>, prod({LIN}, {FORM_ZERO}))",
            expect=HOLDS,
        ),
        CheckSpec(
            key="vec-reflects",
            kind="reflects-amalgamation",
            functor="bil-to-vec",
            expect=FAILS,
            scope=small,
        ),
        CheckSpec(
            key="pair-reflects",
            kind="reflects-amalgamation",
            functor="<bil-to-vec, bil-to-binfunc>",
            expect=HOLDS,
            scope=small,
        ),
    ]
    return SuiteConfig(
        name="bil-uniqueness",
        checks=checks,
        scope=Scope(max_object_size=3, max_completion_size=4),
        description="uniqueness of the star relation on bilinear spaces",
    )


def _sigma_graph_completion() -> SuiteConfig:
    checks = [
        CheckSpec(
            key="swap-completion",
            kind="completion",
            functor="sigma-graph-to-graph",
            relation=GRAPH_PULLBACK,
            request=sigma_swap_request().to_dict(),
            expect=FAILS,
        ),
        CheckSpec(
            key="completions-2",
            kind="completions",
            functor="sigma-graph-to-graph",
            relation=GRAPH_PULLBACK,
            dimension=2,
            expect=FAILS,
        ),
        CheckSpec(
            key="preserves-joins",
            kind="preserves-joins",
            functor="sigma-graph-to-graph",
            expect=HOLDS,
            scope=Scope(max_object_size=3, max_completion_size=4),
        ),
    ]
    return SuiteConfig(
        name="sigma-graph-completion",
        checks=checks,
        scope=Scope(max_object_size=2, max_completion_size=4),
        description="sigma-graphs over graphs preserve joins but miss 2-completions",
    )


def _lift_laws() -> SuiteConfig:
    chains = (
        ("identity-fin-set", "identity-fin-set", SET_PULLBACK),
        ("sigma-graph-to-graph", "graph-to-set", SET_PULLBACK),
        ("conn-to-graph", "graph-to-set", SET_PULLBACK),
        ("identity-fin-bil-2", "bil-to-vec", LIN),
    )
    checks = [
        CheckSpec(
            key=f"lift-law:{first}:{second}",
            kind="lift-law",
            functor=first,
            second_functor=second,
            relation=rel,
            expect=HOLDS,
        )
        for first, second, rel in chains
    ]
    checks.append(
        CheckSpec(
            key="identity-lift",
            kind="extensional",
            relation=f"lift(identity-fin-set, {SET_PULLBACK})",
            second_relation=SET_PULLBACK,
            expect=HOLDS,
        )
    )
    lifts = (
        ("graph-to-set", SET_PULLBACK),
        ("sigma-graph-to-graph", GRAPH_PULLBACK),
        ("sigma-set-to-set", SET_PULLBACK),
        ("conn-to-graph", GRAPH_PULLBACK),
        ("fin-set-fold", SET_PULLBACK),
        ("bil-to-vec", LIN),
        ("bil-to-binfunc", FORM_ZERO),
    )
    checks.extend(
        CheckSpec(
            key=f"basic-properties:{functor}",
            kind="lifting-basic-properties",
            functor=functor,
            relation=rel,
            expect=HOLDS,
        )
        for functor, rel in lifts
    )
    checks.extend(
        CheckSpec(key=f"audit:{functor}", kind="audit-functor", functor=functor, expect=HOLDS)
        for functor in ("graph-to-set", "bil-to-vec", "conn-to-graph", "fin-set-fold")
    )
    checks.extend(
        CheckSpec(
            key=f"completion-implication:{functor}",
            kind="completion-implication",
            functor=functor,
            relation=rel,
            expect=HOLDS,
            scope=Scope(max_object_size=2, max_completion_size=3),
        )
        for functor, rel in (("identity-fin-set", SET_PULLBACK), ("bil-to-vec", LIN))
    )
    return SuiteConfig(
        name="lift-laws",
        checks=checks,
        scope=Scope(max_object_size=3, max_completion_size=5),
        description="identity and composition laws of lifting, and the universal axioms",
    )


def _join_oracle() -> SuiteConfig:
    checks = [
        CheckSpec(
            key=f"join-oracle:{category}",
            kind="join-oracle",
            category=category,
            system=system,
            expect=HOLDS,
            scope=Scope(max_object_size=size, max_completion_size=2 * size),
        )
        for category, system, size in (
            ("fin-set", "surj-inj", 5),
            ("fin-graph", "surj-emb", 4),
            ("fin-vec-2", "surj-inj", 3),
        )
    ]
    return SuiteConfig(
        name="join-oracle",
        checks=checks,
        description="joins from multipushouts against brute-force joins",
    )


def _lift_everything_bil() -> SuiteConfig:
    lifted = f"lift(bil-to-vec, {LIN})"
    hypothesis = axiom_checks("lin", LIN, SIMPLE_AXIOMS) + [
        CheckSpec(key="completions-2", kind="completions", functor="bil-to-vec", relation=LIN, dimension=2),
        CheckSpec(key="horn-amalgamation", kind="horn-amalgamation", functor="bil-to-vec", relation=LIN),
        CheckSpec(key="preserves-joins", kind="preserves-joins", functor="bil-to-vec"),
        CheckSpec(key="reduct", kind="audit-functor", functor="bil-to-vec"),
    ]
    conclusion = axiom_checks("lifted", lifted, SIMPLE_AXIOMS)
    return SuiteConfig(
        name="lift-everything-bil",
        checks=hypothesis + conclusion,
        scope=Scope(max_object_size=2, max_completion_size=4),
        theorem=Theorem(hypothesis=_keys(hypothesis), conclusion=_keys(conclusion)),
        description="simplicity of the linear relation lifts to bilinear spaces",
    )


def _left_multiadjoint_lifts_simplicity() -> SuiteConfig:
    lifted = f"lift(conn-to-graph, {GRAPH_PULLBACK})"
    hypothesis = axiom_checks("graph", GRAPH_PULLBACK, SIMPLE_AXIOMS) + [
        CheckSpec(key="multiadjoint", kind="multiadjoint", functor="conn-to-graph"),
        CheckSpec(key="reflects-amalgamation", kind="reflects-amalgamation", functor="conn-to-graph"),
    ]
    conclusion = axiom_checks("connected", lifted, SIMPLE_AXIOMS)
    extra = [
        CheckSpec(
            key="emergent-strong",
            kind="emergent-strong-3-amalgamation",
            relation=GRAPH_PULLBACK,
            expect=HOLDS,
        )
    ]
    return SuiteConfig(
        name="left-multiadjoint-lifts-simplicity",
        checks=hypothesis + conclusion + extra,
        scope=Scope(max_object_size=3, max_completion_size=6),
        theorem=Theorem(hypothesis=_keys(hypothesis), conclusion=_keys(conclusion)),
        description="pullbacks of graphs lift along the inclusion of connected graphs",
    )


def predefined_suites() -> List[SuiteConfig]:
    """Every shipped suite, in name order."""
    suites = [
        _bil_uniqueness(),
        SuiteConfig(name="empty", description="no checks"),
        _finset_mono_stable(),
        _graph_lift(),
        _join_oracle(),
        _left_multiadjoint_lifts_simplicity(),
        _lift_everything_bil(),
        _lift_laws(),
        _semi_invariance_example(),
        _sigma_graph_completion(),
    ]
    return sorted(suites, key=lambda s: s.name)


def references(config: SuiteConfig) -> List[str]:
    """Registry names the suite's checks refer to."""
    names: List[str] = []
    for spec in config.checks:
        for name in (
            spec.relation,
            spec.second_relation,
            spec.functor,
            spec.second_functor,
            spec.category,
        ):
            if name is not None and name not in names:
                names.append(name)
    return names


def default_registry(settings: Optional[Settings] = None) -> InstanceRegistry:
    """The shipped instances together with every suite whose references resolve."""
    registry = build_registry(settings)
    known = set(registry.categories) | set(registry.functors) | set(registry.relations)
    disabled = set(settings.disabled_instances) if settings else set()
    for config in predefined_suites():
        if config.name in disabled:
            continue
        missing = [n for n in references(config) if n not in known]
        if missing:
            logger.info("suite %s unavailable: missing %s", config.name, ", ".join(missing))
            continue
        registry.add("suites", config.name, config, references(config))
    return registry
