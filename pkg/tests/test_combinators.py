"""Tests for product and coproduct categories."""
import pytest

from indlift.backend.combinators import CoproductCategory, ProductCategory
from indlift.backend.errors import KindError, MalformedDiagramError
from indlift.backend.models import Cospan, Obstruction
from indlift.backend.structures import FinGraphCategory, FinSetCategory

from conftest import graph_object, set_object


@pytest.fixture
def pair():
    return ProductCategory([FinSetCategory(), FinSetCategory()])


@pytest.fixture
def twice():
    return CoproductCategory([FinSetCategory(), FinSetCategory()])


def test_product_name_and_class(pair):
    """Test the product's default name and its componentwise class."""
    assert pair.name == "fin-set-x-fin-set"
    assert pair.default_class_name == "inj"
    assert pair.default_class.injective


def test_product_carrier_is_tagged(pair):
    """Test that a product carrier tags each element with its factor."""
    obj = pair.make([set_object(1), set_object(2)])
    assert obj.carrier == ((0, 0), (1, 0), (1, 1))
    assert pair.part(obj, 1) == set_object(2)
    assert pair.contains(obj)


def test_product_enumeration(pair):
    """Test that objects of size n have some component of size n."""
    assert len(pair.enumerate_objects(0)) == 1
    assert len(pair.enumerate_objects(1)) == 3
    assert len(pair.enumerate_objects(2)) == 5


def test_product_hom_set(pair):
    """Test that product hom-sets are products of component hom-sets."""
    dom = pair.make([set_object(2), set_object(1)])
    cod = pair.make([set_object(2), set_object(2)])
    assert len(pair.hom_set(dom, cod)) == 8
    assert len(pair.hom_set(dom, cod, pair.default_class)) == 4


def test_product_component_round_trip(pair):
    """Test that a product morphism is rebuilt from its components."""
    dom = pair.make([set_object(2), set_object(1)])
    cod = pair.make([set_object(2), set_object(2)])
    f = pair.hom_set(dom, cod)[-1]
    parts = [pair.component(f, j) for j in range(2)]
    assert pair.tuple_morphism(dom, cod, parts) == f
    assert parts[1].cod == set_object(2)


def test_product_rejects_mixing_factors(pair):
    """Test that a table sending elements across factors is not a morphism."""
    dom = pair.make([set_object(1), set_object(1)])
    assert not pair.is_structure_map(dom, dom, ((1, 0), (0, 0)))


def test_product_pullback(pair):
    """Test that the product pullback is computed per factor."""
    one = pair.make([set_object(1), set_object(1)])
    two = pair.make([set_object(2), set_object(2)])
    f = pair.morphism(one, two, ((0, 0), (1, 0)))
    g = pair.morphism(one, two, ((0, 1), (1, 0)))
    sq = pair.pullback(Cospan(f, g))
    assert pair.part(sq.c, 0).size == 0
    assert pair.part(sq.c, 1).size == 1


def test_product_glue(pair):
    """Test that gluing two product objects over the empty one adds the parts."""
    zero = pair.make([set_object(0), set_object(0)])
    one = pair.make([set_object(1), set_object(1)])
    f = pair.morphism(zero, one, ())
    result = pair.glue([zero, one, one], [(0, 1, f), (0, 2, f)])
    assert [pair.part(result.apex, j).size for j in range(2)] == [2, 2]


def test_coproduct_shared_classes(twice):
    """Test that the coproduct keeps the classes every summand has."""
    assert twice.name == "fin-set-plus-fin-set"
    assert "inj" in twice.classes
    assert twice.default_class_name == "inj"


def test_coproduct_mixed_summands_fall_back_to_all():
    """Test that summands without a shared default class use the ambient class."""
    mixed = CoproductCategory([FinSetCategory(), FinGraphCategory()])
    assert mixed.default_class_name == "all"
    assert len(mixed.enumerate_objects(2)) == 1 + 2


def test_coproduct_wrap_and_homs(twice):
    """Test that components never map into each other."""
    left = twice.wrap(0, set_object(2))
    right = twice.wrap(1, set_object(2))
    assert twice.inner(left) == set_object(2)
    assert len(twice.hom_set(left, left)) == 4
    assert twice.hom_set(left, right) == ()
    assert len(twice.enumerate_objects(1)) == 2


def test_coproduct_untagged_object(twice):
    """Test that an object without a component tag has no summand."""
    with pytest.raises(KindError):
        twice.summand(set_object(1))


def test_coproduct_glue_across_components(twice):
    """Test that gluing objects from different components is obstructed."""
    zero = twice.wrap(0, set_object(0))
    other = twice.wrap(1, set_object(1))
    result = twice.glue([zero, other], [])
    assert isinstance(result, Obstruction)
    assert result.reason == "component-mismatch"


def test_coproduct_pullback_across_components(twice):
    """Test that a cospan across components is malformed."""
    a = twice.wrap(0, set_object(1))
    b = twice.wrap(1, set_object(1))
    f = twice.morphism(a, a, (0,))
    g = twice.morphism(b, b, (0,))
    with pytest.raises(MalformedDiagramError):
        twice.pullback(Cospan(f, g))


def test_coproduct_subobjects_stay_in_component(twice):
    """Test that subobjects are those of the tagged summand."""
    obj = twice.wrap(1, set_object(2))
    subs = twice.subobjects_of(obj)
    assert len(subs) == 4
    assert all(s.rep.dom.data.tag == 1 for s in subs)


def test_graph_product_counts():
    """Test enumeration of a product mixing sets and graphs."""
    mixed = ProductCategory([FinSetCategory(), FinGraphCategory()], ["inj", "emb"])
    assert mixed.default_class_name == "inj-emb"
    assert len(mixed.enumerate_objects(1)) == 3
    obj = mixed.make([set_object(1), graph_object(2, [(0, 1)])])
    assert mixed.contains(obj)
