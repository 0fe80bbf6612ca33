"""Product and coproduct combinators over concrete categories."""
import itertools
import logging
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from indlift.backend.categories import (
    Arrow,
    ConcreteCategory,
    GlueResult,
    Gluing,
)
from indlift.backend.errors import KindError, MalformedDiagramError
from indlift.backend.models import (
    CommutingSquare,
    Cospan,
    Element,
    MorphismClass,
    Obstruction,
    Span,
    StructData,
    StructKind,
    StructMorphism,
    StructObject,
    Subobject,
)

logger = logging.getLogger(__name__)


class ProductCategory(ConcreteCategory):
    """Componentwise product; the carrier is the tagged union of the components."""

    kind = StructKind.PRODUCT

    def __init__(
        self,
        factors: Sequence[ConcreteCategory],
        class_names: Optional[Sequence[str]] = None,
        name: Optional[str] = None,
        max_homs: int = 200_000,
    ) -> None:
        """Initialize the product and its componentwise class."""
        super().__init__(name or "-x-".join(c.name for c in factors), max_homs)
        self.factors = tuple(factors)
        self.capabilities = frozenset.intersection(*(c.capabilities for c in factors))
        self.component_classes: Dict[str, Tuple[Optional[MorphismClass], ...]] = {
            "all": tuple(None for _ in factors),
            "iso": tuple(c.bijections for c in factors),
        }
        names = list(class_names or [c.default_class_name for c in factors])
        classes = tuple(c.morphism_class(n) for c, n in zip(factors, names))
        joined = "-".join(dict.fromkeys(names))
        self.component_classes[joined] = classes
        self.add_class(
            MorphismClass(
                joined,
                lambda f: all(
                    self.component(f, j) in cls for j, cls in enumerate(classes)
                ),
                injective=all(c.injective for c in classes),
                reflecting=any(c.reflecting for c in classes),
                left_cancellable=all(c.left_cancellable for c in classes),
            )
        )
        self.default_class_name = joined

    # objects and morphisms

    def make(self, parts: Sequence[StructObject]) -> StructObject:
        """Tuple component objects into a product object."""
        carrier = tuple((j, x) for j, part in enumerate(parts) for x in part.carrier)
        return StructObject(self.kind, carrier, StructData(components=tuple(parts)))

    def part(self, obj: StructObject, j: int) -> StructObject:
        """The j-th component object."""
        assert obj.data.components is not None
        return obj.data.components[j]

    def component(self, f: StructMorphism, j: int) -> StructMorphism:
        """The j-th component morphism."""
        table = tuple(y for (i, _), (_, y) in zip(f.dom.carrier, f.table) if i == j)
        return StructMorphism(self.part(f.dom, j), self.part(f.cod, j), table)

    def tuple_morphism(
        self, dom: StructObject, cod: StructObject, parts: Sequence[StructMorphism]
    ) -> StructMorphism:
        """Assemble a product morphism from its components."""
        table = tuple((j, parts[j](x)) for j, x in dom.carrier)
        return StructMorphism(dom, cod, table)

    def _well_formed(self, obj: StructObject) -> bool:
        parts = obj.data.components
        if parts is None or len(parts) != len(self.factors):
            return False
        if not all(c.contains(p) for c, p in zip(self.factors, parts)):
            return False
        return obj == self.make(parts)

    def is_structure_map(
        self, dom: StructObject, cod: StructObject, table: Tuple[Element, ...]
    ) -> bool:
        if any(y[0] != x[0] for x, y in zip(dom.carrier, table)):
            return False
        f = StructMorphism(dom, cod, table)
        return all(
            c.is_structure_map(self.part(dom, j), self.part(cod, j), self.component(f, j).table)
            for j, c in enumerate(self.factors)
        )

    def _classes_for(self, cls: Optional[MorphismClass]) -> Tuple[Optional[MorphismClass], ...]:
        if cls is not None and cls.name in self.component_classes:
            return self.component_classes[cls.name]
        return tuple(None for _ in self.factors)

    @lru_cache(maxsize=4096)
    def _hom_set(self, dom, cod, cls, cap):
        per_factor = [
            c.hom_set(self.part(dom, j), self.part(cod, j), k, cap)
            for j, (c, k) in enumerate(zip(self.factors, self._classes_for(cls)))
        ]
        homs = []
        for parts in itertools.product(*per_factor):
            f = self.tuple_morphism(dom, cod, parts)
            if cls is None or f in cls:
                homs.append(f)
        return tuple(homs)

    def is_iso(self, f: StructMorphism) -> bool:
        return all(c.is_iso(self.component(f, j)) for j, c in enumerate(self.factors))

    def invariant(self, obj: StructObject) -> Tuple:
        return tuple(c.invariant(self.part(obj, j)) for j, c in enumerate(self.factors))

    @lru_cache(maxsize=None)
    def enumerate_objects(self, n: int) -> Tuple[StructObject, ...]:
        pools = [c.objects(n) for c in self.factors]
        return tuple(
            self.make(parts)
            for parts in itertools.product(*pools)
            if max((p.size for p in parts), default=0) == n
        )

    # subobjects

    def closure(self, obj: StructObject, elements) -> FrozenSet[Element]:
        chosen = set(elements)
        closed = set()
        for j, c in enumerate(self.factors):
            inner = c.closure(self.part(obj, j), {x for i, x in chosen if i == j})
            closed |= {(j, x) for x in inner}
        return frozenset(closed)

    def substructure(self, obj: StructObject, elements) -> StructMorphism:
        chosen = set(elements)
        parts = [
            c.substructure(self.part(obj, j), {x for i, x in chosen if i == j})
            for j, c in enumerate(self.factors)
        ]
        return self.tuple_morphism(self.make([p.dom for p in parts]), obj, parts)

    @lru_cache(maxsize=1024)
    def subobjects_of(
        self, obj: StructObject, cls: Optional[MorphismClass] = None
    ) -> Tuple[Subobject, ...]:
        cls = cls or self.default_class
        per_factor = [
            c.subobjects_of(self.part(obj, j), k)
            for j, (c, k) in enumerate(zip(self.factors, self._classes_for(cls)))
        ]
        subs = []
        for parts in itertools.product(*per_factor):
            reps = [s.rep for s in parts]
            rep = self.tuple_morphism(self.make([r.dom for r in reps]), obj, reps)
            subs.append(Subobject(obj, rep))
        return tuple(subs)

    def subobject_key(self, rep: StructMorphism) -> Tuple[FrozenSet, FrozenSet]:
        edges = frozenset(
            (j, e)
            for j, c in enumerate(self.factors)
            for e in c.subobject_key(self.component(rep, j))[1]
        )
        return rep.image, edges

    def tight_cocones(
        self, span: Span, cls: MorphismClass, max_size: int
    ) -> Iterator[Cospan]:
        """Tuples of tight cocones of the components."""
        per_factor = [
            list(
                c.tight_cocones(
                    Span(self.component(span.left, j), self.component(span.right, j)),
                    k or c.default_class,
                    max_size,
                )
            )
            for j, (c, k) in enumerate(zip(self.factors, self._classes_for(cls)))
        ]
        for parts in itertools.product(*per_factor):
            apex = self.make([p.apex for p in parts])
            left = self.tuple_morphism(span.left.cod, apex, [p.left for p in parts])
            right = self.tuple_morphism(span.right.cod, apex, [p.right for p in parts])
            if left in cls and right in cls:
                yield Cospan(left, right)

    # limits and colimits

    def pullback(self, cospan: Cospan) -> CommutingSquare:
        squares = [
            c.pullback(Cospan(self.component(cospan.left, j), self.component(cospan.right, j)))
            for j, c in enumerate(self.factors)
        ]
        apex = self.make([sq.c for sq in squares])
        p1 = self.tuple_morphism(apex, cospan.left.dom, [sq.span.left for sq in squares])
        p2 = self.tuple_morphism(apex, cospan.right.dom, [sq.span.right for sq in squares])
        return CommutingSquare(Span(p1, p2), cospan)

    def glue(self, objects: Sequence[StructObject], arrows: Sequence[Arrow]) -> GlueResult:
        """Glue each component separately."""
        gluings: List[Gluing] = []
        for j, c in enumerate(self.factors):
            result = c.glue(
                [self.part(o, j) for o in objects],
                [(s, t, self.component(f, j)) for s, t, f in arrows],
            )
            if isinstance(result, Obstruction):
                return Obstruction(result.reason, result.details + (("component", j),))
            if result is None:
                return None
            gluings.append(result)
        apex = self.make([g.apex for g in gluings])
        legs = tuple(
            self.tuple_morphism(obj, apex, [g.legs[i] for g in gluings])
            for i, obj in enumerate(objects)
        )
        return Gluing(apex, legs)

    def leg_defects(self, leg: StructMorphism, cls: MorphismClass) -> Dict:
        defects = {}
        for j, (c, k) in enumerate(zip(self.factors, self._classes_for(cls))):
            if k is None:
                continue
            found = c.leg_defects(self.component(leg, j), k)
            if found:
                defects[str(j)] = found
        return defects

    def image_factorization(
        self, f: StructMorphism, induced: bool = True
    ) -> Tuple[StructMorphism, StructMorphism]:
        pairs = [
            c.image_factorization(self.component(f, j), induced)
            for j, c in enumerate(self.factors)
        ]
        image = self.make([m.dom for _, m in pairs])
        e = self.tuple_morphism(f.dom, image, [e for e, _ in pairs])
        m = self.tuple_morphism(image, f.cod, [m for _, m in pairs])
        return e, m


class CoproductCategory(ConcreteCategory):
    """Disjoint union of categories; objects carry the index of their component."""

    kind = StructKind.TAGGED

    def __init__(
        self,
        summands: Sequence[ConcreteCategory],
        name: Optional[str] = None,
        max_homs: int = 200_000,
    ) -> None:
        """Initialize the coproduct with the classes every summand shares."""
        super().__init__(name or "-plus-".join(c.name for c in summands), max_homs)
        self.summands = tuple(summands)
        self.capabilities = frozenset.intersection(*(c.capabilities for c in summands))
        shared = set(summands[0].classes)
        for c in summands[1:]:
            shared &= set(c.classes)
        for class_name in sorted(shared - {"all"}):
            flags = summands[0].classes[class_name]
            self.add_class(
                MorphismClass(
                    class_name,
                    self._member(class_name),
                    injective=flags.injective,
                    reflecting=flags.reflecting,
                    left_cancellable=flags.left_cancellable,
                )
            )
        default = summands[0].default_class_name
        self.default_class_name = default if default in self.classes else "all"

    def _member(self, class_name: str):
        def member(f: StructMorphism) -> bool:
            tag = f.dom.data.tag
            if tag is None or tag != f.cod.data.tag:
                return False
            return self.unwrap(f) in self.summands[tag].classes[class_name]

        return member

    def wrap(self, tag: int, inner: StructObject) -> StructObject:
        """Tag an object of the summand with the given index."""
        return StructObject(self.kind, inner.carrier, StructData(tag=tag, inner=inner))

    def inner(self, obj: StructObject) -> StructObject:
        assert obj.data.inner is not None
        return obj.data.inner

    def summand(self, obj: StructObject) -> ConcreteCategory:
        if obj.data.tag is None or not 0 <= obj.data.tag < len(self.summands):
            raise KindError("object carries no valid component tag")
        return self.summands[obj.data.tag]

    def unwrap(self, f: StructMorphism) -> StructMorphism:
        return StructMorphism(self.inner(f.dom), self.inner(f.cod), f.table)

    def rewrap(self, f: StructMorphism, tag: int) -> StructMorphism:
        return StructMorphism(self.wrap(tag, f.dom), self.wrap(tag, f.cod), f.table)

    def _well_formed(self, obj: StructObject) -> bool:
        tag, inner = obj.data.tag, obj.data.inner
        if tag is None or inner is None or not 0 <= tag < len(self.summands):
            return False
        return self.summands[tag].contains(inner) and obj.carrier == inner.carrier

    def is_structure_map(
        self, dom: StructObject, cod: StructObject, table: Tuple[Element, ...]
    ) -> bool:
        if dom.data.tag != cod.data.tag:
            return False
        return self.summand(dom).is_structure_map(self.inner(dom), self.inner(cod), table)

    @lru_cache(maxsize=4096)
    def _hom_set(self, dom, cod, cls, cap):
        if dom.data.tag != cod.data.tag:
            return ()
        tag = dom.data.tag
        inner_cls = None
        if cls is not None and cls.name in self.summands[tag].classes and cls.name != "iso":
            inner_cls = self.summands[tag].classes[cls.name]
        elif cls is not None and cls.name == "iso":
            inner_cls = self.summands[tag].bijections
        homs = self.summands[tag].hom_set(self.inner(dom), self.inner(cod), inner_cls, cap)
        return tuple(
            f for f in (self.rewrap(h, tag) for h in homs) if cls is None or f in cls
        )

    def invariant(self, obj: StructObject) -> Tuple:
        return (obj.data.tag, self.summand(obj).invariant(self.inner(obj)))

    @lru_cache(maxsize=None)
    def enumerate_objects(self, n: int) -> Tuple[StructObject, ...]:
        return tuple(
            self.wrap(tag, obj)
            for tag, c in enumerate(self.summands)
            for obj in c.enumerate_objects(n)
        )

    def closure(self, obj: StructObject, elements) -> FrozenSet[Element]:
        return self.summand(obj).closure(self.inner(obj), elements)

    def substructure(self, obj: StructObject, elements) -> StructMorphism:
        inclusion = self.summand(obj).substructure(self.inner(obj), elements)
        return self.rewrap(inclusion, obj.data.tag)

    @lru_cache(maxsize=1024)
    def subobjects_of(
        self, obj: StructObject, cls: Optional[MorphismClass] = None
    ) -> Tuple[Subobject, ...]:
        cls = cls or self.default_class
        tag = obj.data.tag
        inner = self.summands[tag].subobjects_of(
            self.inner(obj), self.summands[tag].classes[cls.name]
        )
        return tuple(Subobject(obj, self.rewrap(s.rep, tag)) for s in inner)

    def subobject_key(self, rep: StructMorphism) -> Tuple[FrozenSet, FrozenSet]:
        return self.summand(rep.cod).subobject_key(self.unwrap(rep))

    def tight_cocones(
        self, span: Span, cls: MorphismClass, max_size: int
    ) -> Iterator[Cospan]:
        tag = span.apex.data.tag
        summand = self.summands[tag]
        inner = Span(self.unwrap(span.left), self.unwrap(span.right))
        for cocone in summand.tight_cocones(inner, summand.classes[cls.name], max_size):
            yield Cospan(self.rewrap(cocone.left, tag), self.rewrap(cocone.right, tag))

    def pullback(self, cospan: Cospan) -> CommutingSquare:
        tag = cospan.apex.data.tag
        if cospan.left.dom.data.tag != tag or cospan.right.dom.data.tag != tag:
            raise MalformedDiagramError("cospan crosses components")
        inner = self.summands[tag].pullback(
            Cospan(self.unwrap(cospan.left), self.unwrap(cospan.right))
        )
        return CommutingSquare(
            Span(self.rewrap(inner.span.left, tag), self.rewrap(inner.span.right, tag)),
            cospan,
        )

    def glue(self, objects: Sequence[StructObject], arrows: Sequence[Arrow]) -> GlueResult:
        """Glue inside the single component a connected diagram lives in."""
        tags = {o.data.tag for o in objects}
        if len(tags) != 1:
            return Obstruction("component-mismatch", (("tags", sorted(tags)),))
        (tag,) = tags
        result = self.summands[tag].glue(
            [self.inner(o) for o in objects],
            [(s, t, self.unwrap(f)) for s, t, f in arrows],
        )
        if not isinstance(result, Gluing):
            return result
        apex = self.wrap(tag, result.apex)
        return Gluing(
            apex,
            tuple(StructMorphism(o, apex, leg.table) for o, leg in zip(objects, result.legs)),
        )

    def leg_defects(self, leg: StructMorphism, cls: MorphismClass) -> Dict:
        summand = self.summand(leg.dom)
        return summand.leg_defects(self.unwrap(leg), summand.classes[cls.name])

    def image_factorization(
        self, f: StructMorphism, induced: bool = True
    ) -> Tuple[StructMorphism, StructMorphism]:
        tag = f.dom.data.tag
        e, m = self.summands[tag].image_factorization(self.unwrap(f), induced)
        return self.rewrap(e, tag), self.rewrap(m, tag)
