"""Finite concrete categories: composition, hom enumeration, limits, colimits, subobjects."""
import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import (
    Callable,
    Dict,
    FrozenSet,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from indlift.backend.errors import (
    CapabilityError,
    CompositionError,
    ContractError,
    KindError,
    MalformedDiagramError,
    ScopeExceededError,
)
from indlift.backend.models import (
    CommutingSquare,
    Cospan,
    Element,
    MorphismClass,
    Obstruction,
    Scope,
    Span,
    StructData,
    StructKind,
    StructMorphism,
    StructObject,
    Subobject,
)

logger = logging.getLogger(__name__)

PULLBACK = "pullback"
MULTIPUSHOUT = "multipushout"
FACTORIZATION = "factorization"
CANONICAL_AMALGAM = "canonical-amalgam"
AMALGAMATION_DECIDER = "amalgamation-decider"
JOINS = "joins"

Arrow = Tuple[int, int, StructMorphism]


def compose(g: StructMorphism, f: StructMorphism) -> StructMorphism:
    """Return g after f."""
    if f.cod != g.dom:
        raise CompositionError(
            "codomain of f differs from domain of g",
            {"f": f.to_dict(), "g": g.to_dict()},
        )
    return StructMorphism(f.dom, g.cod, tuple(g(y) for y in f.table))


def identity(obj: StructObject) -> StructMorphism:
    """Return the identity morphism of an object."""
    return StructMorphism(obj, obj, obj.carrier)


def check_square_shape(sq: CommutingSquare) -> None:
    """Raise if the four morphisms of a square do not line up."""
    f, g, l, r = sq.morphisms
    if f.dom != g.dom or l.dom != f.cod or r.dom != g.cod or l.cod != r.cod:
        raise MalformedDiagramError("square endpoints do not match", sq.to_dict())


def is_commuting_square(sq: CommutingSquare) -> bool:
    """Whether C -> A -> M and C -> B -> M agree pointwise."""
    check_square_shape(sq)
    f, g, l, r = sq.morphisms
    return all(l(f(c)) == r(g(c)) for c in sq.c.carrier)


@dataclass(frozen=True)
class Gluing:
    """A colimit of a finite diagram: apex plus one leg per diagram object."""

    apex: StructObject
    legs: Tuple[StructMorphism, ...]


GlueResult = Union[Gluing, Obstruction, None]


@dataclass(frozen=True)
class FactorizationSystem:
    """An (E, M) factorization system with its factorizing map."""

    name: str
    e_class: MorphismClass
    m_class: MorphismClass
    split: Callable[[StructMorphism], Tuple[StructMorphism, StructMorphism]] = field(
        compare=False, hash=False
    )

    def factorize(self, f: StructMorphism) -> Tuple[StructMorphism, StructMorphism]:
        """Return (e, m) with m after e equal to f."""
        e, m = self.split(f)
        return e, m


class _UnionFind:
    """Union-find over hashable nodes, keeping insertion order."""

    def __init__(self) -> None:
        self.parent: Dict[Element, Element] = {}

    def add(self, node: Element) -> None:
        self.parent.setdefault(node, node)

    def find(self, node: Element) -> Element:
        root = node
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[node] != root:
            self.parent[node], node = root, self.parent[node]
        return root

    def union(self, a: Element, b: Element) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def canonical_forms(
    keys: Sequence[Tuple[int, ...]],
    n: int,
    act: Callable[[Tuple[int, ...], Tuple[int, ...]], Tuple[int, ...]],
) -> List[Tuple[int, ...]]:
    """Lexicographically minimal representative of each S_n orbit of encodings."""
    seen: set = set()
    reps = []
    perms = list(itertools.permutations(range(n)))
    for key in keys:
        if key in seen:
            continue
        orbit = {act(key, p) for p in perms}
        seen |= orbit
        reps.append(min(orbit))
    return sorted(set(reps))


def partial_matchings(
    left: Sequence[Element], right: Sequence[Element], smallest: int = 0
) -> Iterator[Tuple[Tuple[Element, Element], ...]]:
    """Partial injections left -> right as pair tuples, fewest pairs first."""
    for k in range(smallest, min(len(left), len(right)) + 1):
        for chosen in itertools.combinations(left, k):
            for targets in itertools.permutations(right, k):
                yield tuple(zip(chosen, targets))


class ConcreteCategory:
    """An enumerable category of finite structures of a single kind."""

    kind: StructKind = StructKind.SET
    min_size = 0
    capabilities: FrozenSet[str] = frozenset()

    def __init__(self, name: str, max_homs: int = 200_000) -> None:
        """Initialize the category with its 'all' and 'iso' classes."""
        self.name = name
        self.max_homs = max_homs
        self.classes: Dict[str, MorphismClass] = {}
        self.factorization_systems: Dict[str, FactorizationSystem] = {}
        self.default_class_name = "all"
        self.add_class(MorphismClass("all", lambda f: True, ambient=True))
        self.bijections = MorphismClass("iso", self.is_iso, injective=True)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"

    # classes and capabilities

    def add_class(self, cls: MorphismClass) -> MorphismClass:
        """Register a named morphism class."""
        self.classes[cls.name] = cls
        return cls

    def morphism_class(self, name: Optional[str] = None) -> MorphismClass:
        """Look up a registered class; defaults to the category's ambient class."""
        key = name or self.default_class_name
        if key not in self.classes:
            raise KindError(
                f"category {self.name} has no class {key!r}",
                {"classes": sorted(self.classes)},
            )
        return self.classes[key]

    @property
    def default_class(self) -> MorphismClass:
        return self.morphism_class()

    def supports(self, capability: str) -> bool:
        """Whether an exact construction is available."""
        return capability in self.capabilities

    def require(self, capability: str) -> None:
        """Raise a capability error naming the missing construction."""
        if capability not in self.capabilities:
            raise CapabilityError(
                f"{self.name} lacks the {capability} construction",
                {"category": self.name, "capability": capability},
            )

    # objects

    def contains(self, obj: StructObject) -> bool:
        """Whether obj is a well-formed object of this category."""
        return obj.kind == self.kind and self._well_formed(obj)

    def _well_formed(self, obj: StructObject) -> bool:
        return len(set(obj.carrier)) == len(obj.carrier)

    def check_object(self, obj: StructObject) -> None:
        """Raise a kind error unless obj lives in this category."""
        if not self.contains(obj):
            raise KindError(
                f"object does not belong to {self.name}",
                {"object": obj.to_dict(), "category": self.name},
            )

    def enumerate_objects(self, n: int) -> Tuple[StructObject, ...]:
        """All objects of size n, one per isomorphism class, in canonical order."""
        raise NotImplementedError

    @lru_cache(maxsize=None)
    def objects(self, max_size: int) -> Tuple[StructObject, ...]:
        """All objects up to max_size, smaller first."""
        found: List[StructObject] = []
        for n in range(self.min_size, max_size + 1):
            found.extend(self.enumerate_objects(n))
        logger.debug("%s has %d objects up to size %d", self.name, len(found), max_size)
        return tuple(found)

    def invariant(self, obj: StructObject) -> Tuple:
        """An isomorphism invariant used to bucket objects before iso search."""
        return (len(obj.carrier), obj.size)

    # morphisms

    def is_structure_map(
        self, dom: StructObject, cod: StructObject, table: Tuple[Element, ...]
    ) -> bool:
        """Whether the table is a morphism dom -> cod of this category."""
        raise NotImplementedError

    def morphism(self, dom: StructObject, cod: StructObject, mapping) -> StructMorphism:
        """Build a morphism from a dict or a table, validating it."""
        if isinstance(mapping, dict):
            table = tuple(mapping[x] for x in dom.carrier)
        else:
            table = tuple(mapping)
        if len(table) != len(dom.carrier) or any(y not in cod.positions for y in table):
            raise KindError("table is not a map between the carriers")
        if not self.is_structure_map(dom, cod, table):
            raise KindError(
                f"map does not preserve {self.kind} structure",
                {"dom": dom.to_dict(), "cod": cod.to_dict()},
            )
        return StructMorphism(dom, cod, table)

    def _consistent(
        self, dom: StructObject, cod: StructObject, table: List[Element], i: int
    ) -> bool:
        """Partial check after assigning the image of the i-th domain element."""
        return True

    def _candidate_tables(
        self, dom: StructObject, cod: StructObject, injective: bool
    ) -> Iterator[Tuple[Element, ...]]:
        n = len(dom.carrier)
        table: List[Element] = [None] * n
        used: set = set()

        def extend(i: int) -> Iterator[Tuple[Element, ...]]:
            if i == n:
                candidate = tuple(table)
                if self.is_structure_map(dom, cod, candidate):
                    yield candidate
                return
            for y in cod.carrier:
                if injective and y in used:
                    continue
                table[i] = y
                if self._consistent(dom, cod, table, i):
                    used.add(y)
                    yield from extend(i + 1)
                    used.discard(y)
            table[i] = None

        yield from extend(0)

    def hom_set(
        self,
        dom: StructObject,
        cod: StructObject,
        cls: Optional[MorphismClass] = None,
        cap: Optional[int] = None,
    ) -> Tuple[StructMorphism, ...]:
        """All morphisms dom -> cod (restricted to cls), in deterministic order."""
        self.check_object(dom)
        self.check_object(cod)
        return self._hom_set(dom, cod, cls, cap or self.max_homs)

    @lru_cache(maxsize=8192)
    def _hom_set(
        self,
        dom: StructObject,
        cod: StructObject,
        cls: Optional[MorphismClass],
        cap: int,
    ) -> Tuple[StructMorphism, ...]:
        injective = cls is not None and cls.injective
        homs: List[StructMorphism] = []
        for table in self._candidate_tables(dom, cod, injective):
            f = StructMorphism(dom, cod, table)
            if cls is None or f in cls:
                homs.append(f)
                if len(homs) > cap:
                    raise ScopeExceededError(
                        f"hom-set in {self.name} exceeds {cap} morphisms",
                        {"dom": dom.to_dict(), "cod": cod.to_dict(), "cap": cap},
                    )
        return tuple(homs)

    def inverse(self, f: StructMorphism) -> StructMorphism:
        """Inverse of a bijective morphism's table."""
        back = {y: x for x, y in zip(f.dom.carrier, f.table)}
        return StructMorphism(f.cod, f.dom, tuple(back[y] for y in f.cod.carrier))

    def is_iso(self, f: StructMorphism) -> bool:
        """Whether f is invertible in the category."""
        if not (f.is_injective() and f.is_surjective()):
            return False
        g = self.inverse(f)
        return self.is_structure_map(g.dom, g.cod, g.table)

    def isomorphisms(self, x: StructObject, y: StructObject) -> Tuple[StructMorphism, ...]:
        """All isomorphisms x -> y."""
        if len(x.carrier) != len(y.carrier) or self.invariant(x) != self.invariant(y):
            return ()
        return self.hom_set(x, y, self.bijections)

    def automorphisms(self, x: StructObject) -> Tuple[StructMorphism, ...]:
        """The automorphism group of x as a tuple of morphisms."""
        return self.isomorphisms(x, x)

    def is_mono(self, f: StructMorphism, scope: Optional[Scope] = None) -> bool:
        """Left-cancellability; brute force against parallel pairs when a scope is given."""
        if scope is None:
            return f.is_injective()
        for x in self.objects(scope.max_object_size):
            homs = self.hom_set(x, f.dom, cap=scope.max_homs)
            images: Dict[Tuple[Element, ...], StructMorphism] = {}
            for u in homs:
                key = compose(f, u).table
                if key in images and images[key] != u:
                    return False
                images[key] = u
        return True

    # substructures and subobjects

    def closure(self, obj: StructObject, elements) -> FrozenSet[Element]:
        """Smallest substructure carrier containing the elements."""
        return frozenset(elements)

    def _induced_data(self, obj: StructObject, carrier: Tuple[Element, ...]) -> StructData:
        return StructData()

    def substructure(self, obj: StructObject, elements) -> StructMorphism:
        """Inclusion of the induced substructure on a closed set of elements."""
        chosen = frozenset(elements)
        carrier = tuple(x for x in obj.carrier if x in chosen)
        sub = StructObject(self.kind, carrier, self._induced_data(obj, carrier))
        return StructMorphism(sub, obj, carrier)

    def closed_subsets(self, obj: StructObject) -> Iterator[FrozenSet[Element]]:
        """Closed subsets of the carrier, smaller first."""
        seen = set()
        for k in range(len(obj.carrier) + 1):
            for subset in itertools.combinations(obj.carrier, k):
                closed = self.closure(obj, subset)
                if len(closed) == k and closed not in seen:
                    seen.add(closed)
                    yield closed

    @lru_cache(maxsize=1024)
    def subobjects_of(
        self, obj: StructObject, cls: Optional[MorphismClass] = None
    ) -> Tuple[Subobject, ...]:
        """All cls-subobjects of obj up to isomorphism over obj."""
        cls = cls or self.default_class
        if not cls.injective:
            raise ContractError(
                f"class {cls.name} is not a class of monomorphisms",
                {"category": self.name},
            )
        subs = []
        for closed in self.closed_subsets(obj):
            rep = self.substructure(obj, closed)
            if rep in cls:
                subs.append(Subobject(obj, rep))
        return tuple(subs)

    def subobject_key(self, rep: StructMorphism) -> Tuple[FrozenSet, FrozenSet]:
        """Image of carrier and edges; two subobjects are equal iff their keys are."""
        edges = frozenset(
            frozenset((rep(u), rep(v))) for u, v in (tuple(e) for e in rep.dom.data.edges)
        )
        return rep.image, edges

    def factor_through(
        self, f: StructMorphism, g: StructMorphism
    ) -> Optional[StructMorphism]:
        """Some h with g after h equal to f, or None."""
        if f.cod != g.cod:
            raise MalformedDiagramError("morphisms do not share a codomain")
        if g.is_injective():
            back = {y: x for x, y in zip(g.dom.carrier, g.table)}
            if not all(y in back for y in f.table):
                return None
            table = tuple(back[y] for y in f.table)
            if not self.is_structure_map(f.dom, g.dom, table):
                return None
            return StructMorphism(f.dom, g.dom, table)
        for h in self.hom_set(f.dom, g.dom):
            if compose(g, h).table == f.table:
                return h
        return None

    def factorizations(
        self, f: StructMorphism, g: StructMorphism, cls: Optional[MorphismClass] = None
    ) -> List[StructMorphism]:
        """All h in cls with g after h equal to f."""
        if g.is_injective():
            h = self.factor_through(f, g)
            return [h] if h is not None and (cls is None or h in cls) else []
        return [h for h in self.hom_set(f.dom, g.dom, cls) if compose(g, h).table == f.table]

    def mediating(
        self,
        apex: StructObject,
        legs: Sequence[StructMorphism],
        targets: Sequence[StructMorphism],
        cls: Optional[MorphismClass] = None,
    ) -> List[StructMorphism]:
        """All u: apex -> target apex in cls with u after legs[i] equal to targets[i]."""
        if not targets:
            return []
        cod = targets[0].cod
        table: Dict[Element, Element] = {}
        for leg, target in zip(legs, targets):
            for x in leg.dom.carrier:
                y = leg(x)
                if table.setdefault(y, target(x)) != target(x):
                    return []
        if len(table) == len(apex.carrier):
            candidate = tuple(table[y] for y in apex.carrier)
            if not self.is_structure_map(apex, cod, candidate):
                return []
            u = StructMorphism(apex, cod, candidate)
            return [u] if cls is None or u in cls else []
        return [
            u
            for u in self.hom_set(apex, cod, cls)
            if all(u(y) == v for y, v in table.items())
        ]

    def is_tight(self, legs: Sequence[StructMorphism]) -> bool:
        """Whether the images of the legs generate their common codomain."""
        apex = legs[0].cod
        images = set().union(*(leg.image for leg in legs))
        return len(self.closure(apex, images)) == len(apex.carrier)

    def tight_cocones(
        self, span: Span, cls: MorphismClass, max_size: int
    ) -> Iterator[Cospan]:
        """Cocones over the span generated by their legs, one per iso class.

        Apexes are quotients of the pushout by a partial matching of the two
        sides, decorated with whatever structure the kind leaves free; the
        plain pushout comes first.
        """
        if not cls.injective:
            raise ContractError(f"class {cls.name} is not a class of monomorphisms")
        f, g = span.left, span.right
        objects = [span.apex, f.cod, g.cod]
        arrows = [(0, 1, f), (0, 2, g)]
        base = self._glue_for_cocones(objects, arrows, ())
        if not isinstance(base, Gluing):
            return
        in_b = base.legs[2].image
        in_a = base.legs[1].image
        a_only = [x for x in f.cod.carrier if base.legs[1](x) not in in_b]
        b_only = [y for y in g.cod.carrier if base.legs[2](y) not in in_a]
        smallest = max(0, len(base.apex.carrier) - max_size)
        for matching in partial_matchings(a_only, b_only, smallest):
            glued = self._glue_for_cocones(
                objects, arrows, [((1, x), (2, y)) for x, y in matching]
            )
            if not isinstance(glued, Gluing):
                continue
            left, right = glued.legs[1], glued.legs[2]
            if glued.apex.size > max_size:
                continue
            if not (left.is_injective() and right.is_injective()):
                continue
            for apex in self._tight_decorations(glued.apex, left, right, cls):
                if not self.contains(apex):
                    continue
                l = StructMorphism(f.cod, apex, left.table)
                r = StructMorphism(g.cod, apex, right.table)
                if l in cls and r in cls:
                    yield Cospan(l, r)

    def _glue_for_cocones(self, objects, arrows, identify) -> GlueResult:
        return self.glue(objects, arrows, identify)

    def _tight_decorations(
        self,
        apex: StructObject,
        left: StructMorphism,
        right: StructMorphism,
        cls: MorphismClass,
    ) -> Iterator[StructObject]:
        """Structures on a glued carrier that restrict correctly to both sides."""
        yield apex

    # limits and colimits

    def _pullback_data(
        self, a: StructObject, b: StructObject, pairs: Tuple[Tuple[Element, Element], ...]
    ) -> StructData:
        return StructData()

    def pullback(self, cospan: Cospan) -> CommutingSquare:
        """The canonical pullback square of a cospan."""
        self.require(PULLBACK)
        f, g = cospan.left, cospan.right
        if f.cod != g.cod:
            raise MalformedDiagramError("cospan legs have different codomains")
        pairs = tuple(
            (a, b) for a in f.dom.carrier for b in g.dom.carrier if f(a) == g(b)
        )
        apex = StructObject(self.kind, pairs, self._pullback_data(f.dom, g.dom, pairs))
        p1 = StructMorphism(apex, f.dom, tuple(a for a, _ in pairs))
        p2 = StructMorphism(apex, g.dom, tuple(b for _, b in pairs))
        return CommutingSquare(Span(p1, p2), cospan)

    def comparison_to_pullback(self, sq: CommutingSquare) -> StructMorphism:
        """The induced map from the square's apex into the canonical pullback."""
        canonical = self.pullback(sq.cocone)
        p1, p2 = canonical.span.left, canonical.span.right
        lookup = {(p1(p), p2(p)): p for p in canonical.c.carrier}
        f, g = sq.span.left, sq.span.right
        return StructMorphism(
            sq.c, canonical.c, tuple(lookup[(f(c), g(c))] for c in sq.c.carrier)
        )

    def _congruence(self, objects: Sequence[StructObject], uf: _UnionFind) -> None:
        """Close the identification under the kind's operations."""

    def _glue_data(
        self,
        objects: Sequence[StructObject],
        tables: Sequence[Tuple[int, ...]],
        size: int,
    ) -> Union[StructData, Obstruction]:
        return StructData()

    def glue(
        self,
        objects: Sequence[StructObject],
        arrows: Sequence[Arrow],
        identify: Sequence[Tuple[Tuple[int, Element], Tuple[int, Element]]] = (),
    ) -> GlueResult:
        """Colimit of a finite diagram in the category of all structure maps.

        Extra pairs in identify are merged as well; set-like kinds use this to
        enumerate quotients of a pushout.
        """
        uf = _UnionFind()
        for i, obj in enumerate(objects):
            for x in obj.carrier:
                uf.add((i, x))
        for s, t, f in arrows:
            if f.dom != objects[s] or f.cod != objects[t]:
                raise MalformedDiagramError("arrow endpoints do not match the diagram")
            for x in f.dom.carrier:
                uf.union((s, x), (t, f(x)))
        for left, right in identify:
            uf.union(left, right)
        self._congruence(objects, uf)
        labels: Dict[Element, int] = {}
        tables = []
        for i, obj in enumerate(objects):
            row = []
            for x in obj.carrier:
                root = uf.find((i, x))
                row.append(labels.setdefault(root, len(labels)))
            tables.append(tuple(row))
        data = self._glue_data(objects, tables, len(labels))
        if isinstance(data, Obstruction):
            return data
        apex = StructObject(self.kind, tuple(range(len(labels))), data)
        legs = tuple(StructMorphism(obj, apex, t) for obj, t in zip(objects, tables))
        return Gluing(apex, legs)

    def leg_defects(self, leg: StructMorphism, cls: MorphismClass) -> Dict:
        """Explain why a colimit leg is outside cls: identified pairs, unreflected edges."""
        collisions = []
        seen: Dict[Element, Element] = {}
        for x, y in zip(leg.dom.carrier, leg.table):
            if y in seen:
                collisions.append([seen[y], x])
            else:
                seen[y] = x
        unreflected = []
        if cls.reflecting:
            carrier = leg.dom.carrier
            for i, x in enumerate(carrier):
                for z in carrier[i + 1 :]:
                    if leg.cod.has_edge(leg(x), leg(z)) and not leg.dom.has_edge(x, z):
                        unreflected.append([x, z])
        defects: Dict = {}
        if collisions:
            defects["identified"] = collisions
        if unreflected:
            defects["edge-disagreement"] = unreflected
        return defects

    def image_factorization(
        self, f: StructMorphism, induced: bool = True
    ) -> Tuple[StructMorphism, StructMorphism]:
        """(e, m): corestriction onto the image, then the image inclusion."""
        m = self.substructure(f.cod, self.closure(f.cod, f.image))
        if not induced:
            m = self._edge_image(f, m)
        e = StructMorphism(f.dom, m.dom, f.table)
        return e, m

    def _edge_image(self, f: StructMorphism, m: StructMorphism) -> StructMorphism:
        return m

    def factorization_system(self, name: Optional[str] = None) -> FactorizationSystem:
        """Look up a factorization system; the first registered is the default."""
        self.require(FACTORIZATION)
        if name is None:
            return next(iter(self.factorization_systems.values()))
        if name not in self.factorization_systems:
            raise KindError(f"{self.name} has no factorization system {name!r}")
        return self.factorization_systems[name]

    def add_factorization_system(
        self,
        name: str,
        m_class: MorphismClass,
        induced: bool = True,
        e_class: Optional[MorphismClass] = None,
    ) -> FactorizationSystem:
        """Register an image factorization; E defaults to the surjections."""
        if e_class is None:
            e_class = self.add_class(
                MorphismClass("surj", lambda f: f.is_surjective())
            )
        system = FactorizationSystem(
            name,
            e_class,
            m_class,
            lambda f: self.image_factorization(f, induced=induced),
        )
        self.factorization_systems[name] = system
        return system
