"""Tests for lifted relations, completions and multi-reflections."""
from pathlib import Path

import pytest

from indlift.backend.errors import ContractError, MalformedDiagramError
from indlift.backend.functors import graph_to_set
from indlift.backend.lifting import (
    CompletionRequest,
    check_completions,
    check_horn_amalgamation,
    check_lifting_basic_properties,
    check_multiadjoint,
    check_reflects_amalgamation,
    complete,
    cocone_factorization,
    comparison_morphisms,
    completion_implication_check,
    compose_lift_law_check,
    find_completion,
    insert_identities,
    lift_relation,
    multi_reflection_at,
    preserves_joins_check,
    validate_completion,
)
from indlift.backend.models import Scope, VerdictStatus
from indlift.backend.utils import read_json

from conftest import set_object

FIXTURES = Path(__file__).resolve().parent.parent / "indlift" / "fixtures"

HOLDS = VerdictStatus.HOLDS


def test_lift_relation_name_and_class(registry):
    """Test that the lift lives on the functor's domain with its class."""
    lifted = lift_relation(
        registry.functor("graph-to-set"), registry.relation("fin-set/inj/pullback")
    )
    assert lifted.name == "lift(graph-to-set, fin-set/inj/pullback)"
    assert lifted.category.name == "fin-graph"
    assert lifted.cls.name == "emb"


def test_lift_relation_contract(registry):
    """Test that a relation must live on the codomain in the codomain class."""
    forget = registry.functor("graph-to-set")
    with pytest.raises(ContractError):
        lift_relation(forget, registry.relation("fin-graph/emb/pullback"))
    with pytest.raises(ContractError):
        lift_relation(forget, registry.relation("fin-set/all/pullback"))


def test_sigma_swap_has_no_completion(registry):
    """Test that an edge between swapped pairs cannot carry the swap."""
    spec = read_json(FIXTURES / "sigma-graph-completion.json")["spec"]
    request = CompletionRequest.from_dict(spec["request"])
    verdict = find_completion(
        registry.functor("sigma-graph-to-graph"),
        registry.relation("fin-graph/emb/pullback"),
        request,
        Scope(max_object_size=2, max_completion_size=4),
    )
    assert verdict.status == VerdictStatus.FAILS
    assert verdict.check == "completion-2"
    assert verdict.certificate["reason"] == "endomorphism-edge"
    assert verdict.certificate["method"] == "decider"


def test_identity_completions(registry, small):
    """Test that every request completes along the identity."""
    F = registry.functor("identity-fin-set")
    rel = registry.relation("fin-set/inj/pullback")
    for dimension in (1, 2):
        verdict = check_completions(F, rel, small, dimension)
        assert verdict.status == HOLDS
        assert verdict.obligations > 0
        assert verdict.check == f"completions-{dimension}"


def test_graph_to_set_completions(registry, small):
    """Test that arrows out of vertex sets lift to graph embeddings."""
    F = registry.functor("graph-to-set")
    rel = registry.relation("fin-set/inj/pullback")
    verdict = check_completions(F, rel, small, 1)
    assert verdict.status == HOLDS
    assert verdict.certificate["sample"]["method"] in ("construction", "search")


def test_insert_identities(registry):
    """Test that a one-piece request is raised to a span request."""
    F = registry.functor("identity-fin-set")
    rel = registry.relation("fin-set/inj/pullback")
    one, two = set_object(1), set_object(2)
    arrow = F.cod.morphism(one, two, (1,))
    request = CompletionRequest(1, source=one, arrow=arrow)
    raised = insert_identities(F, request)
    assert raised.dimension == 2
    assert raised.cocone.left == arrow
    raised.validate(F, rel)
    with pytest.raises(ContractError):
        insert_identities(F, CompletionRequest(3))
    with pytest.raises(MalformedDiagramError):
        CompletionRequest(4).validate(F, rel)


def test_lift_law(registry, small):
    """Test that lifting in two steps agrees with lifting along the composite."""
    verdict = compose_lift_law_check(
        registry.functor("identity-fin-graph"),
        registry.functor("graph-to-set"),
        registry.relation("fin-set/inj/pullback"),
        small,
    )
    assert verdict.status == HOLDS
    assert verdict.check == "lift-law"


def test_forgetting_edges_does_not_reflect_amalgamation(registry, small):
    """Test that two vertices with and without an edge amalgamate only as sets."""
    verdict = check_reflects_amalgamation(registry.functor("graph-to-set"), small)
    assert verdict.status == VerdictStatus.FAILS
    assert len(verdict.witness["squares"]) == 2
    assert "image_amalgam" in verdict.certificate


def test_identity_reflects_amalgamation(registry, tiny):
    """Test that the identity functor reflects amalgamation."""
    assert check_reflects_amalgamation(registry.functor("identity-fin-set"), tiny).status == HOLDS


def test_horn_amalgamation_along_identity(registry, tiny):
    """Test that horns complete along the identity functor."""
    verdict = check_horn_amalgamation(
        registry.functor("identity-fin-set"), registry.relation("fin-set/inj/pullback"), tiny
    )
    assert verdict.status == HOLDS
    assert verdict.notes[0].startswith("assumes amalgamation")


def test_completion_implication(registry, tiny):
    """Test that raised completions restrict to completions along the identity."""
    verdict = completion_implication_check(
        registry.functor("identity-fin-set"), registry.relation("fin-set/inj/pullback"), tiny
    )
    assert verdict.status == HOLDS
    assert verdict.obligations > 0


def test_identity_is_multiadjoint(registry, small):
    """Test that the identity has a one-arrow multi-reflection everywhere."""
    F = registry.functor("identity-fin-set")
    assert check_multiadjoint(F, small).status == HOLDS
    mr = multi_reflection_at(F, set_object(2), small)
    assert len(mr.family) == 1
    assert mr.family[0][0] == set_object(2)


def test_forgetting_edges_is_not_multiadjoint(fin_graph, fin_set, small):
    """Test that both graphs on two vertices receive the empty graph."""
    verdict = check_multiadjoint(graph_to_set(fin_graph, fin_set), small)
    assert verdict.status == VerdictStatus.INCONCLUSIVE
    assert verdict.witness["target"]["carrier"] == [0, 1]


def test_cocone_factorization(registry, small):
    """Test that a cocone factors through the family and compares to itself."""
    F = registry.functor("identity-fin-set")
    mr = multi_reflection_at(F, set_object(2), small)
    leg = F.cod.morphism(set_object(1), set_object(2), (1,))
    found = cocone_factorization(F, mr, [set_object(1)], [], [leg])
    assert found.member == 0
    assert found.legs[0].table == (1,)
    assert len(comparison_morphisms(F, found, [leg], found.mediating)) == 1
    with pytest.raises(ContractError):
        cocone_factorization(F, mr, [], [], [])


def test_forgetting_edges_preserves_joins(fin_graph, fin_set, small):
    """Test that the vertex set of a join is the union of the vertex sets."""
    verdict = preserves_joins_check(graph_to_set(fin_graph, fin_set), small)
    assert verdict.status == HOLDS


def test_lifting_basic_properties(registry, tiny):
    """Test that the universal axioms carry over to the lift."""
    verdict = check_lifting_basic_properties(
        registry.functor("graph-to-set"), registry.relation("fin-set/inj/pullback"), tiny
    )
    assert verdict.status == HOLDS
    assert verdict.relation == "lift(graph-to-set, fin-set/inj/pullback)"


def test_validate_completion_rejects_wrong_maps(registry):
    """Test that a completion whose map misses the arrow does not replay."""
    F = registry.functor("identity-fin-set")
    rel = registry.relation("fin-set/inj/pullback")
    one, two = set_object(1), set_object(2)
    request = CompletionRequest(1, source=one, arrow=F.cod.morphism(one, two, (1,)))
    status, result, _ = complete(F, rel, request, Scope())
    assert status == HOLDS
    assert validate_completion(F, rel, request, result)
    wrong = type(result)(result.obj, result.h, (F.dom.morphism(one, two, (0,)),))
    assert not validate_completion(F, rel, request, wrong)
