"""Tests for the axiom checkers and their replay."""
import pytest

from indlift.backend.checkers import (
    NSOP1_AXIOMS,
    SIMPLE_AXIOMS,
    STABLE_AXIOMS,
    Sweep,
    audit_class,
    check_axiom,
    check_axioms,
    check_extensional_identity,
    check_join_base_monotonicity,
    check_join_oracle,
    check_strong_from_three,
    classify_verdicts,
    complete_horn,
    cross_check_basic_existence,
    general_squares,
    replay_witness,
)
from indlift.backend.categories import identity
from indlift.backend.errors import CapabilityError, ContractError
from indlift.backend.models import Axiom, Horn, MorphismClass, Scope, VerdictStatus
from indlift.backend.relations import IndependenceRelation, pullback_relation
from indlift.backend.structures import FinSetCategory

from conftest import set_object

HOLDS = VerdictStatus.HOLDS
FAILS = VerdictStatus.FAILS


@pytest.fixture
def injective_pullback(fin_set):
    return pullback_relation(fin_set, fin_set.morphism_class("inj"))


@pytest.fixture
def all_pullback(fin_set):
    return pullback_relation(fin_set, fin_set.morphism_class("all"))


@pytest.mark.parametrize(
    "axiom",
    [
        Axiom.INVARIANCE,
        Axiom.MONOTONICITY,
        Axiom.TRANSITIVITY,
        Axiom.SYMMETRY,
        Axiom.BASIC_EXISTENCE,
        Axiom.EXISTENCE,
        Axiom.BASE_MONOTONICITY,
    ],
)
def test_set_pullbacks_satisfy(injective_pullback, small, axiom):
    """Test that pullbacks of injections satisfy the basic axioms."""
    verdict = check_axiom(injective_pullback, axiom, small)
    assert verdict.status == HOLDS
    assert verdict.obligations > 0
    assert verdict.check == axiom.value


@pytest.mark.slow
def test_set_pullbacks_are_stable(injective_pullback, small):
    """Test that the full stable list holds for sets at small scope."""
    verdicts = check_axioms(injective_pullback, STABLE_AXIOMS, small)
    assert {a: v.status for a, v in verdicts.items()} == {a: HOLDS for a in STABLE_AXIOMS}
    label = classify_verdicts({a: v.status for a, v in verdicts.items()})
    assert label["classification"] == "stable-within-scope"
    assert "proxy" in verdicts[Axiom.UNION_FINITE_CHAIN].notes[-1]


def test_invariance_fails_for_all_maps(all_pullback, small):
    """Test that collapsing the apex breaks invariance but not semi-invariance."""
    verdict = check_axiom(all_pullback, Axiom.INVARIANCE, small)
    assert verdict.status == FAILS
    assert set(verdict.witness) == {"inner", "outer", "extension"}
    assert check_axiom(all_pullback, Axiom.SEMI_INVARIANCE, small).status == HOLDS


def test_replay_reproduces_invariance_failure(all_pullback, small):
    """Test that a stored invariance failure fails again on replay."""
    verdict = check_axiom(all_pullback, Axiom.INVARIANCE, small)
    replayed = replay_witness(all_pullback, verdict)
    assert replayed.status == FAILS
    assert replayed.check == "invariance"


def test_replay_rejects_passing_verdicts(injective_pullback, tiny):
    """Test that only failing verdicts with a witness can be replayed."""
    verdict = check_axiom(injective_pullback, Axiom.SYMMETRY, tiny)
    with pytest.raises(ContractError):
        replay_witness(injective_pullback, verdict)


def test_general_mode_capabilities(all_pullback, tiny):
    """Test that non-injective classes only support the universal axioms."""
    assert check_axiom(all_pullback, Axiom.SYMMETRY, tiny).status == HOLDS
    with pytest.raises(CapabilityError):
        check_axiom(all_pullback, Axiom.TRANSITIVITY, tiny)
    with pytest.raises(CapabilityError):
        check_join_base_monotonicity(all_pullback, tiny)


def test_general_squares_commute(fin_set):
    """Test that the enumerated squares commute and start with the empty apex."""
    squares = list(general_squares(fin_set, fin_set.morphism_class("all"), 1))
    assert squares[0].m.size == 0
    for sq in squares:
        f, g, l, r = sq.morphisms
        assert [l(x) for x in f.table] == [r(x) for x in g.table]


def test_classify_verdicts_labels():
    """Test the hierarchy labels from axiom statuses."""
    every = {a: HOLDS for a in STABLE_AXIOMS}
    assert classify_verdicts(every)["classification"] == "stable-within-scope"
    simple = {**every, Axiom.UNIQUENESS: FAILS}
    assert classify_verdicts(simple)["classification"] == "simple-within-scope"
    nsop1 = {a: HOLDS for a in NSOP1_AXIOMS}
    result = classify_verdicts(nsop1)
    assert result["classification"] == "nsop1-like-within-scope"
    assert result["missing"] == ["base-monotonicity", "uniqueness"]
    partial = {a: HOLDS for a in SIMPLE_AXIOMS[1:]}
    assert classify_verdicts(partial)["classification"] == "unclassified"
    assert classify_verdicts({}, chain_length=7)["union"] == "proxy (finite chains <= 7)"


def test_audit_class(fin_set, small):
    """Test the class audit on injections and on a class missing an identity."""
    assert audit_class(fin_set, fin_set.morphism_class("inj"), small).status == HOLDS
    nonempty = MorphismClass("nonempty", lambda f: len(f.dom.carrier) > 0)
    verdict = audit_class(fin_set, nonempty, small)
    assert verdict.status == FAILS
    assert verdict.witness["reason"] == "identity"


def test_audit_class_left_cancellation(fin_set, small):
    """Test that a class claiming left cancellation is held to it."""
    everything = MorphismClass("everything", lambda f: True, left_cancellable=True)
    surjective = MorphismClass(
        "surjective", lambda f: f.is_surjective(), left_cancellable=True
    )
    assert audit_class(fin_set, everything, small).status == HOLDS
    verdict = audit_class(fin_set, surjective, small)
    assert verdict.status == FAILS
    assert verdict.witness["reason"] == "left-cancellation"


def test_extensional_identity(injective_pullback, fin_set, small):
    """Test that a relation agrees with itself and not with another category's."""
    same = pullback_relation(fin_set, fin_set.morphism_class("inj"), name="again")
    verdict = check_extensional_identity(injective_pullback, same, small)
    assert verdict.status == HOLDS
    assert verdict.relation == "fin-set/inj/pullback = again"
    other = FinSetCategory()
    with pytest.raises(ContractError):
        check_extensional_identity(
            injective_pullback, pullback_relation(other, other.morphism_class("inj")), small
        )


def test_cross_check_basic_existence(injective_pullback, small):
    """Test that existence and invariance carry over to basic existence."""
    verdict = cross_check_basic_existence(injective_pullback, small)
    assert verdict.status == HOLDS
    assert verdict.check == "cross-check-basic-existence"


def test_join_checks(injective_pullback, fin_set, small):
    """Test the join oracle and join base monotonicity on sets."""
    oracle = check_join_oracle(fin_set, Scope(max_object_size=3))
    assert oracle.status == HOLDS
    assert oracle.relation == "fin-set/surj-inj"
    assert check_join_base_monotonicity(injective_pullback, small).status == HOLDS


def test_strong_three_amalgamation_emerges(injective_pullback, tiny):
    """Test that closed horns of sets have independent top faces."""
    verdict = check_strong_from_three(injective_pullback, tiny)
    assert verdict.status == HOLDS


def test_product_verdicts_note_the_size_convention(registry, tiny):
    """Test that verdicts on a product category say how object size is measured."""
    rel = registry.relation("prod(fin-vec-2/inj/lin, fin-binfunc-2/mono/form-zero)")
    verdict = check_axiom(rel, Axiom.SYMMETRY, tiny)
    assert verdict.status == HOLDS
    assert "object size is the largest component size" in verdict.notes


def apex_at_least(cat, size):
    """Squares on injections whose apex has at least size points."""
    return IndependenceRelation(
        f"fin-set/inj/apex-{size}",
        cat,
        cat.morphism_class("inj"),
        lambda sq: sq.cocone.left.cod.size >= size,
    )


def empty_horn():
    e = identity(set_object(0))
    return Horn(e, e, e, e, e, e, e, e, e)


@pytest.mark.parametrize("strong", [False, True])
def test_complete_horn_searches_past_the_colimit(fin_set, strong):
    """Test that a dependent colimit cube gives way to a larger independent one."""
    sweep = Sweep(apex_at_least(fin_set, 1), Scope(max_object_size=1, max_completion_size=1))
    status, cube, certificate = complete_horn(sweep, empty_horn(), strong)
    assert status == HOLDS
    assert certificate is None
    assert cube.n1_to_n.cod.size == 1


def test_complete_horn_keeps_the_dependent_cube(fin_set):
    """Test that an unclosable horn reports the first dependent cube it met."""
    sweep = Sweep(apex_at_least(fin_set, 2), Scope(max_object_size=1, max_completion_size=1))
    status, cube, certificate = complete_horn(sweep, empty_horn())
    assert status == VerdictStatus.INCONCLUSIVE
    assert certificate == {"reason": "completion-not-independent"}
    assert cube.n1_to_n.cod.size == 0


def test_base_monotonicity_note_names_the_search_bound(fin_set, tiny):
    """Test that undischarged base extensions say where candidates were sought."""
    empty_base = IndependenceRelation(
        "fin-set/inj/empty-base",
        fin_set,
        fin_set.morphism_class("inj"),
        lambda sq: sq.c.size == 0,
    )
    verdict = check_axiom(empty_base, Axiom.BASE_MONOTONICITY, tiny)
    assert verdict.status == VerdictStatus.INCONCLUSIVE
    assert set(verdict.witness) == {"square", "base"}
    assert "limited to subobjects of the apex" in verdict.notes[-1]
