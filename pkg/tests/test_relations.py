"""Tests for independence relations."""
import numpy as np
import pytest

from indlift.backend.combinators import ProductCategory
from indlift.backend.errors import ContractError, MalformedDiagramError
from indlift.backend.linear import FinBilCategory, FinVecCategory
from indlift.backend.models import CommutingSquare, Cospan, Span, StructMorphism
from indlift.backend.relations import (
    intersect_relations,
    is_independent,
    product_relation,
    pullback_relation,
    relation_bil_lin,
    relation_bil_star,
    relation_binfunc,
    relation_linvec,
    square_images,
)
from indlift.backend.structures import FinBinFuncCategory, FinSetCategory

from conftest import set_object


def set_square(fin_set, m_size, left_image, right_image, a_size=1, b_size=1, c_size=0):
    """A square of sets whose base {0, ..., c_size-1} sits at the start of A and B."""
    c, a, b, m = set_object(c_size), set_object(a_size), set_object(b_size), set_object(m_size)
    f = fin_set.morphism(c, a, tuple(range(c_size)))
    g = fin_set.morphism(c, b, tuple(range(c_size)))
    l = fin_set.morphism(a, m, left_image)
    r = fin_set.morphism(b, m, right_image)
    return CommutingSquare(Span(f, g), Cospan(l, r))


@pytest.fixture
def set_pullback(fin_set):
    return pullback_relation(fin_set, fin_set.morphism_class("inj"))


def test_pullback_relation_name(set_pullback):
    """Test the registry name of a pullback relation."""
    assert set_pullback.name == "fin-set/inj/pullback"
    assert set_pullback.to_dict()["class"] == "inj"


def test_disjoint_square_is_independent(fin_set, set_pullback):
    """Test that disjoint images over the empty set form a pullback."""
    assert set_pullback.classify(set_square(fin_set, 2, (0,), (1,)))


def test_identified_square_is_not_independent(fin_set, set_pullback):
    """Test that identifying two points over the empty set is not a pullback."""
    assert not is_independent(set_pullback, set_square(fin_set, 1, (0,), (0,)))


def test_square_images(fin_set):
    """Test the images of the corners inside the apex."""
    sq = set_square(fin_set, 3, (0, 1), (0, 2), a_size=2, b_size=2, c_size=1)
    base, left, right = square_images(sq)
    assert base == frozenset({0})
    assert left == frozenset({0, 1})
    assert right == frozenset({0, 2})


def test_classify_rejects_maps_outside_the_class(fin_set, set_pullback):
    """Test that a square with a non-injective leg breaks the contract."""
    sq = set_square(fin_set, 1, (0, 0), (0,), a_size=2)
    with pytest.raises(ContractError) as info:
        set_pullback.classify(sq)
    assert info.value.details["positions"] == [2]


def test_classify_rejects_non_commuting_squares(fin_set, set_pullback):
    """Test that a square that does not commute is malformed."""
    sq = set_square(fin_set, 2, (0,), (1,), c_size=1)
    with pytest.raises(MalformedDiagramError):
        set_pullback.classify(sq)


def vec_square(cat, plane, right_vector):
    """Two lines over zero inside the plane."""
    zero, line = cat.make(0), cat.make(1, np.zeros((1, 1), dtype=np.int64))
    inc = StructMorphism(zero, line, ((0,),))
    a = StructMorphism(line, plane, ((0, 0), (1, 0)))
    b = StructMorphism(line, plane, ((0, 0), right_vector))
    return CommutingSquare(Span(inc, inc), Cospan(a, b))


def test_linvec_needs_a_trivial_intersection():
    """Test the linear relation on two lines in the plane."""
    vec = FinVecCategory(2)
    lin = relation_linvec(vec)
    assert lin.name == "fin-vec-2/inj/lin"
    assert lin.classify(vec_square(vec, vec.make(2), (0, 1)))
    assert not lin.classify(vec_square(vec, vec.make(2), (1, 0)))


def test_bil_star_needs_a_vanishing_form():
    """Test that the star relation also asks the form to vanish across."""
    bil = FinBilCategory(2)
    star, lin = relation_bil_star(bil), relation_bil_lin(bil)
    assert star.name == "fin-bil-2/emb/star"
    flat = vec_square(bil, bil.make(2), (0, 1))
    assert star.classify(flat)
    paired = vec_square(bil, bil.make(2, np.array([[0, 1], [0, 0]])), (0, 1))
    assert lin.classify(paired)
    assert not star.classify(paired)


def test_binfunc_form_zero():
    """Test that the function must vanish between the two new points."""
    bf = FinBinFuncCategory(2)
    rel = relation_binfunc(bf)
    assert rel.name == "fin-binfunc-2/mono/form-zero"
    empty, point = bf.make([]), bf.make([[0]])
    inc = StructMorphism(empty, point, ())

    def square(rows):
        m = bf.make(rows)
        return CommutingSquare(
            Span(inc, inc), Cospan(StructMorphism(point, m, (0,)), StructMorphism(point, m, (1,)))
        )

    assert rel.classify(square([[0, 0], [0, 0]]))
    assert not rel.classify(square([[0, 1], [0, 0]]))
    assert not rel.classify(square([[0, 0], [1, 0]]))


def test_intersect_relations(fin_set, set_pullback):
    """Test the meet of relations and its contract."""
    with pytest.raises(ContractError):
        intersect_relations([])
    assert intersect_relations([set_pullback]) is set_pullback
    other = pullback_relation(FinSetCategory(), FinSetCategory().morphism_class("inj"))
    with pytest.raises(ContractError):
        intersect_relations([set_pullback, other])
    meet = intersect_relations([set_pullback, set_pullback])
    assert meet.name == "meet(fin-set/inj/pullback, fin-set/inj/pullback)"
    assert meet.classify(set_square(fin_set, 2, (0,), (1,)))
    assert not meet.classify(set_square(fin_set, 1, (0,), (0,)))


def test_product_relation_contract():
    """Test that a product relation takes one relation per factor."""
    left, right = FinSetCategory(), FinSetCategory()
    product = ProductCategory([left, right])
    on_left = pullback_relation(left, left.morphism_class("inj"))
    with pytest.raises(ContractError):
        product_relation(product, [on_left])
    with pytest.raises(ContractError):
        product_relation(product, [on_left, on_left])


def test_product_relation_is_componentwise():
    """Test that a product square is independent when every component is."""
    left, right = FinSetCategory(), FinSetCategory()
    product = ProductCategory([left, right])
    rel = product_relation(
        product,
        [
            pullback_relation(left, left.morphism_class("inj")),
            pullback_relation(right, right.morphism_class("inj")),
        ],
    )
    zero = product.make([set_object(0), set_object(0)])
    one = product.make([set_object(1), set_object(1)])
    two = product.make([set_object(2), set_object(2)])
    inc = product.morphism(zero, one, ())
    a = product.morphism(one, two, ((0, 0), (1, 0)))
    disjoint = product.morphism(one, two, ((0, 1), (1, 1)))
    half = product.morphism(one, two, ((0, 1), (1, 0)))
    assert rel.classify(CommutingSquare(Span(inc, inc), Cospan(a, disjoint)))
    assert not rel.classify(CommutingSquare(Span(inc, inc), Cospan(a, half)))


def test_shipped_product_relation(registry):
    """Test the shipped relation on vector spaces with a binary function."""
    rel = registry.relation("prod(fin-vec-2/inj/lin, fin-binfunc-2/mono/form-zero)")
    assert rel.category.name == "fin-vec-2-x-fin-binfunc-2"
