"""Independence relations: named classifiers on commuting squares."""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Sequence, Tuple

import numpy as np

from indlift.backend.categories import (
    PULLBACK,
    ConcreteCategory,
    compose,
    is_commuting_square,
)
from indlift.backend.combinators import ProductCategory
from indlift.backend.errors import ContractError, MalformedDiagramError
from indlift.backend.linear import FinBilCategory, FinVecCategory
from indlift.backend.models import (
    CommutingSquare,
    Cospan,
    MorphismClass,
    Span,
    StructObject,
)
from indlift.backend.structures import FinBinFuncCategory

logger = logging.getLogger(__name__)

Classifier = Callable[[CommutingSquare], bool]


@dataclass(eq=False)
class IndependenceRelation:
    """A decidable class of commuting squares in a category restricted to a class."""

    name: str
    category: ConcreteCategory
    cls: MorphismClass
    classifier: Classifier = field(repr=False)
    description: str = ""

    def classify(self, sq: CommutingSquare) -> bool:
        """Whether the square is independent; the square must commute inside cls."""
        if not is_commuting_square(sq):
            raise MalformedDiagramError("square does not commute", sq.to_dict())
        outside = [i for i, f in enumerate(sq.morphisms) if f not in self.cls]
        if outside:
            raise ContractError(
                f"square has morphisms outside {self.cls.name}",
                {"relation": self.name, "positions": outside},
            )
        return bool(self.classifier(sq))

    def to_dict(self) -> Dict[str, Any]:
        """Convert the relation to a dictionary for serialization."""
        return {
            "name": self.name,
            "category": self.category.name,
            "class": self.cls.name,
            "description": self.description,
        }


def is_independent(rel: IndependenceRelation, sq: CommutingSquare) -> bool:
    """Classify a square with the relation."""
    return rel.classify(sq)


def square_images(sq: CommutingSquare) -> Tuple[frozenset, frozenset, frozenset]:
    """Images of C, A and B inside the apex M."""
    f, _, l, r = sq.morphisms
    return compose(l, f).image, l.image, r.image


def intersection_is_base(sq: CommutingSquare) -> bool:
    """Whether the images of A and B meet exactly in the image of C."""
    base, left, right = square_images(sq)
    return left & right == base


def is_pullback_square(cat: ConcreteCategory, sq: CommutingSquare) -> bool:
    """Whether the comparison into the canonical pullback is an isomorphism."""
    return cat.is_iso(cat.comparison_to_pullback(sq))


def _vanishes_across(table: np.ndarray, apex: StructObject, sq: CommutingSquare) -> bool:
    base, left, right = square_images(sq)
    ia = [apex.index(x) for x in apex.carrier if x in left and x not in base]
    ib = [apex.index(y) for y in apex.carrier if y in right and y not in base]
    if not ia or not ib:
        return True
    block = np.ix_(ia, ib)
    return not (np.any(table[block]) or np.any(table.T[block]))


def pullback_relation(
    cat: ConcreteCategory, cls: MorphismClass, name: str = ""
) -> IndependenceRelation:
    """Pullback squares as an independence relation."""
    cat.require(PULLBACK)
    return IndependenceRelation(
        name or f"{cat.name}/{cls.name}/pullback",
        cat,
        cls,
        lambda sq: is_pullback_square(cat, sq),
        "squares whose apex cone is the pullback of the cospan",
    )


def relation_linvec(cat: FinVecCategory) -> IndependenceRelation:
    """A and B meet exactly in C, on vector spaces and injective linear maps."""
    return IndependenceRelation(
        f"{cat.name}/{cat.default_class_name}/lin",
        cat,
        cat.default_class,
        intersection_is_base,
        "A meets B exactly in C",
    )


def relation_bil_lin(cat: FinBilCategory) -> IndependenceRelation:
    """The linear criterion read on bilinear spaces, ignoring the form."""
    return relation_linvec(cat)


def relation_bil_star(cat: FinBilCategory) -> IndependenceRelation:
    """A meets B in C and the form vanishes both ways between A - C and B - C."""

    def classify(sq: CommutingSquare) -> bool:
        if not intersection_is_base(sq):
            return False
        return _vanishes_across(cat.form_table(sq.m), sq.m, sq)

    return IndependenceRelation(
        f"{cat.name}/{cat.default_class_name}/star",
        cat,
        cat.default_class,
        classify,
        "A meets B in C and [a, b] = [b, a] = 0 off C",
    )


def relation_binfunc(cat: FinBinFuncCategory) -> IndependenceRelation:
    """A meets B in C and the function vanishes both ways between A - C and B - C."""

    def classify(sq: CommutingSquare) -> bool:
        if not intersection_is_base(sq):
            return False
        table = np.array(sq.m.data.table or (), dtype=np.int64).reshape(
            len(sq.m.carrier), len(sq.m.carrier)
        )
        return _vanishes_across(table, sq.m, sq)

    return IndependenceRelation(
        f"{cat.name}/{cat.default_class_name}/form-zero",
        cat,
        cat.default_class,
        classify,
        "A meets B in C and f(a, b) = f(b, a) = 0 off C",
    )


def intersect_relations(rels: Sequence[IndependenceRelation]) -> IndependenceRelation:
    """Squares independent for every relation in the list."""
    if not rels:
        raise ContractError("cannot intersect an empty list of relations")
    first = rels[0]
    for rel in rels[1:]:
        if rel.category is not first.category or rel.cls.name != first.cls.name:
            raise ContractError(
                "relations live on different categories or classes",
                {"left": first.to_dict(), "right": rel.to_dict()},
            )
    if len(rels) == 1:
        return first
    members = tuple(rels)
    return IndependenceRelation(
        "meet(" + ", ".join(r.name for r in members) + ")",
        first.category,
        first.cls,
        lambda sq: all(r.classifier(sq) for r in members),
        "intersection of " + ", ".join(r.name for r in members),
    )


def component_square(cat: ProductCategory, sq: CommutingSquare, j: int) -> CommutingSquare:
    """The j-th component of a square in a product category."""
    f, g, l, r = (cat.component(h, j) for h in sq.morphisms)
    return CommutingSquare(Span(f, g), Cospan(l, r))


def product_relation(
    cat: ProductCategory, rels: Sequence[IndependenceRelation]
) -> IndependenceRelation:
    """Squares in a product whose every component is independent."""
    if len(rels) != len(cat.factors):
        raise ContractError("one relation per factor is required")
    for factor, rel in zip(cat.factors, rels):
        if rel.category is not factor:
            raise ContractError(
                "relation does not live on its factor",
                {"relation": rel.name, "factor": factor.name},
            )
    members = tuple(rels)

    def classify(sq: CommutingSquare) -> bool:
        return all(
            rel.classify(component_square(cat, sq, j)) for j, rel in enumerate(members)
        )

    return IndependenceRelation(
        "prod(" + ", ".join(r.name for r in members) + ")",
        cat,
        cat.default_class,
        classify,
        "componentwise independence",
    )
