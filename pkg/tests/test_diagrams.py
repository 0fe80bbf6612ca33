"""Tests for lattices, span enumeration, amalgams, multipushouts and joins."""
import pytest

from indlift.backend.diagrams import (
    SubobjectLattice,
    amalgamate_squares,
    canonical_spans,
    find_amalgam,
    glue_horn,
    horns,
    join_bruteforce,
    join_via_multipushout,
    multipushout,
    same_subobject,
    tripods,
    verify_multipushout,
)
from indlift.backend.errors import ContractError, MalformedDiagramError
from indlift.backend.models import CommutingSquare, Cospan, Span, Subobject, VerdictStatus

from conftest import set_object


@pytest.fixture
def inj(fin_set):
    return fin_set.morphism_class("inj")


@pytest.fixture
def empty_span(fin_set):
    """Two points over the empty set."""
    leg = fin_set.morphism(set_object(0), set_object(1), ())
    return Span(leg, leg)


def cocone_into(fin_set, size, left, right):
    m = set_object(size)
    return Cospan(
        fin_set.morphism(set_object(1), m, (left,)), fin_set.morphism(set_object(1), m, (right,))
    )


def point_rep(fin_set, x):
    return fin_set.morphism(set_object(1), set_object(2), (x,))


def test_lattice_of_a_two_element_set(fin_set):
    """Test the four subsets of a two-element set and their order."""
    lattice = SubobjectLattice(fin_set, set_object(2))
    assert len(lattice) == 4
    assert lattice.size(lattice.top) == 2
    assert lattice.size(lattice.bottom) == 0
    left = lattice.index_of(point_rep(fin_set, 0))
    right = lattice.index_of(point_rep(fin_set, 1))
    assert lattice.join(left, right) == lattice.top
    assert lattice.meet(left, right) == lattice.bottom
    assert sorted(lattice.below(left)) == sorted([left, lattice.bottom])


def test_lattice_factor_requires_order(fin_set):
    """Test that only ordered subobjects factor through each other."""
    lattice = SubobjectLattice(fin_set, set_object(2))
    left = lattice.index_of(point_rep(fin_set, 0))
    right = lattice.index_of(point_rep(fin_set, 1))
    assert lattice.factor(left, lattice.top).table == (0,)
    with pytest.raises(ContractError):
        lattice.factor(left, right)


def test_lattice_squares_commute(fin_set):
    """Test that every enumerated square of inclusions is well formed."""
    lattice = SubobjectLattice(fin_set, set_object(2))
    found = list(lattice.squares())
    assert (lattice.bottom,) * 4 in found
    c, a, b, m = found[-1]
    sq = lattice.square(c, a, b, m)
    assert sq.m.size == lattice.size(m)


def test_canonical_spans(fin_set, inj):
    """Test span enumeration up to size one and the amalgam bound."""
    assert len(list(canonical_spans(fin_set, inj, 1))) == 5
    assert len(list(canonical_spans(fin_set, inj, 1, amalgam_bound=1))) == 4
    sizes = [s.apex.size + s.left.cod.size + s.right.cod.size for s in canonical_spans(fin_set, inj, 1)]
    assert sizes == sorted(sizes)


def test_horns_over_three_points(fin_set, inj):
    """Test the eight horns over three points and the sizes of their colimits."""
    tripod = next(t for t in tripods(fin_set, inj, 1) if all(leg.cod.size == 1 for leg in t))
    found = list(horns(tripod, lambda span: list(fin_set.tight_cocones(span, inj, 3))))
    assert len(found) == 8
    sizes = sorted(glue_horn(fin_set, h).apex.size for h in found)
    assert sizes == [1, 1, 1, 1, 2, 2, 2, 3]


def test_amalgam_of_identical_squares(fin_set, empty_span):
    """Test that a square amalgamates with itself through the identity."""
    sq = CommutingSquare(empty_span, cocone_into(fin_set, 2, 0, 1))
    amalgam = find_amalgam(fin_set, sq, sq)
    assert amalgam.status == VerdictStatus.HOLDS
    assert amalgam.method == "identical"


def test_amalgam_identifies_points(fin_set, empty_span, small):
    """Test that a disjoint and an identified square have no injective amalgam."""
    disjoint = CommutingSquare(empty_span, cocone_into(fin_set, 2, 0, 1))
    identified = CommutingSquare(empty_span, cocone_into(fin_set, 1, 0, 0))
    amalgam = find_amalgam(fin_set, disjoint, identified, scope=small)
    assert amalgam.status == VerdictStatus.FAILS
    assert amalgam.certificate["reason"] == "identified"
    verdict = amalgamate_squares(fin_set, disjoint, identified, small)
    assert verdict.status == VerdictStatus.FAILS
    assert len(verdict.witness["squares"]) == 2


def test_amalgam_of_two_disjoint_squares(fin_set, empty_span, small):
    """Test that two cocones with the same pattern glue injectively."""
    sq1 = CommutingSquare(empty_span, cocone_into(fin_set, 2, 0, 1))
    sq2 = CommutingSquare(empty_span, cocone_into(fin_set, 2, 1, 0))
    amalgam = find_amalgam(fin_set, sq1, sq2, scope=small)
    assert amalgam.status == VerdictStatus.HOLDS
    assert all(leg.is_injective() for leg in amalgam.legs)


def test_amalgam_needs_a_shared_span(fin_set, empty_span):
    """Test that squares over different spans cannot be amalgamated."""
    sq1 = CommutingSquare(empty_span, cocone_into(fin_set, 2, 0, 1))
    leg = fin_set.morphism(set_object(1), set_object(1), (0,))
    sq2 = CommutingSquare(Span(leg, leg), cocone_into(fin_set, 1, 0, 0))
    with pytest.raises(MalformedDiagramError):
        find_amalgam(fin_set, sq1, sq2)


def test_multipushout_instances(fin_set, fin_graph, empty_span):
    """Test the instance counts of two points over nothing."""
    assert len(multipushout(fin_set, empty_span)) == 1
    assert len(multipushout(fin_set, empty_span, fin_set.morphism_class("inj"))) == 2
    empty, vertex = fin_graph.enumerate_objects(0)[0], fin_graph.enumerate_objects(1)[0]
    leg = fin_graph.morphism(empty, vertex, ())
    graph_instances = multipushout(fin_graph, Span(leg, leg), fin_graph.morphism_class("emb"))
    assert len(graph_instances) == 3


def test_verify_multipushout(fin_set, empty_span, small, inj):
    """Test that every injective cocone factors through exactly one instance."""
    instances = multipushout(fin_set, empty_span, inj)
    verdict = verify_multipushout(fin_set, empty_span, instances, small, inj)
    assert verdict.status == VerdictStatus.HOLDS
    assert verdict.obligations > 0
    partial = verify_multipushout(fin_set, empty_span, instances[:1], small, inj)
    assert partial.status == VerdictStatus.FAILS
    assert sum(partial.witness["counts"]) == 0


def test_joins_agree(fin_set):
    """Test that the lattice join and the multipushout join coincide."""
    a = Subobject(set_object(2), point_rep(fin_set, 0))
    b = Subobject(set_object(2), point_rep(fin_set, 1))
    brute = join_bruteforce(fin_set, a, b)
    assert brute.obj.size == 2
    assert same_subobject(fin_set, brute, join_via_multipushout(fin_set, a, b))


def test_join_needs_one_ambient(fin_set):
    """Test that subobjects of different ambients have no join."""
    a = Subobject(set_object(2), point_rep(fin_set, 0))
    b = Subobject(set_object(1), fin_set.morphism(set_object(1), set_object(1), (0,)))
    with pytest.raises(ContractError):
        join_bruteforce(fin_set, a, b)
