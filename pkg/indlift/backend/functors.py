"""Functors between concrete categories and the structure builders behind completions."""
import itertools
import logging
from dataclasses import dataclass, field
from typing import (
    Callable,
    Dict,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from indlift.backend.categories import ConcreteCategory, Gluing, compose, identity
from indlift.backend.combinators import CoproductCategory, ProductCategory
from indlift.backend.errors import ContractError, KindError
from indlift.backend.linear import FinBilCategory, FinVecCategory
from indlift.backend.models import (
    CommutingSquare,
    Cospan,
    Horn,
    MorphismClass,
    Obstruction,
    Scope,
    Span,
    StructData,
    StructKind,
    StructMorphism,
    StructObject,
    Verdict,
    VerdictStatus,
    element_to_json,
)
from indlift.backend.structures import (
    FinBinFuncCategory,
    FinGraphCategory,
    FinSetCategory,
    SigmaGraphCategory,
    SigmaSetCategory,
    is_connected,
)

logger = logging.getLogger(__name__)

# a piece is a dom object together with a cod morphism from its image
Piece = Tuple[StructObject, StructMorphism]
BuildResult = Union[Obstruction, Iterator[StructObject]]
StructureBuilder = Callable[[StructObject, Sequence[Piece], MorphismClass], BuildResult]


@dataclass(eq=False)
class ConcreteFunctor:
    """A functor between concrete categories.

    Objects go through on_objects. Morphisms keep their tables between the images
    unless on_morphisms is given. The structure builder, when present, proposes dom
    objects over a cod object that receive given pieces; it may instead return an
    Obstruction certifying that no dom object does.
    """

    name: str
    dom: ConcreteCategory
    cod: ConcreteCategory
    on_objects: Callable[[StructObject], StructObject] = field(repr=False)
    on_morphisms: Optional[Callable[[StructMorphism], StructMorphism]] = field(
        default=None, repr=False
    )
    faithful: bool = True
    preserves_joins: bool = False
    reduct: bool = False
    dom_class_name: Optional[str] = None
    cod_class_name: Optional[str] = None
    structures: Optional[StructureBuilder] = field(default=None, repr=False)
    description: str = ""
    _images: Dict[StructObject, StructObject] = field(default_factory=dict, repr=False)

    @property
    def carrier_preserving(self) -> bool:
        """Whether F(f) has the same table as f."""
        return self.on_morphisms is None

    @property
    def dom_class(self) -> MorphismClass:
        return self.dom.morphism_class(self.dom_class_name)

    @property
    def cod_class(self) -> MorphismClass:
        return self.cod.morphism_class(self.cod_class_name)

    def __call__(self, obj: StructObject) -> StructObject:
        """Image of an object."""
        if obj not in self._images:
            if not self.dom.contains(obj):
                raise KindError(f"object is not in {self.dom.name}", {"functor": self.name})
            self._images[obj] = self.on_objects(obj)
        return self._images[obj]

    def morphism(self, f: StructMorphism) -> StructMorphism:
        """Image of a morphism."""
        if self.on_morphisms is not None:
            return self.on_morphisms(f)
        return StructMorphism(self(f.dom), self(f.cod), f.table)

    def span(self, span: Span) -> Span:
        return Span(self.morphism(span.left), self.morphism(span.right))

    def cospan(self, cospan: Cospan) -> Cospan:
        return Cospan(self.morphism(cospan.left), self.morphism(cospan.right))

    def square(self, sq: CommutingSquare) -> CommutingSquare:
        """Image of a commuting square."""
        return CommutingSquare(self.span(sq.span), self.cospan(sq.cocone))

    def horn(self, horn: Horn) -> Horn:
        return Horn(*(self.morphism(f) for _, _, f in horn.arrows))

    def structure_on(
        self, target: StructObject, pieces: Sequence[Piece], cls: MorphismClass
    ) -> BuildResult:
        """Dom objects E with F(E) = target that the pieces may map into."""
        if self.structures is None:
            return iter(())
        return self.structures(target, pieces, cls)

    def preimage(
        self, source: StructObject, target: StructObject, arrow: StructMorphism
    ) -> Optional[StructMorphism]:
        """A dom-class morphism source -> target whose image is arrow, if there is one."""
        if self.carrier_preserving:
            if self(target).carrier != arrow.cod.carrier:
                return None
            if not self.dom.is_structure_map(source, target, arrow.table):
                return None
            f = StructMorphism(source, target, arrow.table)
            return f if f in self.dom_class else None
        for f in self.dom.hom_set(source, target, self.dom_class):
            if self.morphism(f).table == arrow.table:
                return f
        return None

    def to_dict(self) -> Dict:
        """Convert the functor to a dictionary for serialization."""
        return {
            "name": self.name,
            "dom": self.dom.name,
            "cod": self.cod.name,
            "faithful": self.faithful,
            "preserves_joins": self.preserves_joins,
            "reduct": self.reduct,
            "description": self.description,
        }


# structure builders


def _same_target(target: StructObject) -> BuildResult:
    return iter([target])


def _edge_copies(reflecting: bool) -> StructureBuilder:
    """Graphs on a set that contain the edges of every piece."""

    def build(target: StructObject, pieces: Sequence[Piece], cls: MorphismClass) -> BuildResult:
        decided: Dict[frozenset, Tuple[bool, int]] = {}
        for i, (piece, arrow) in enumerate(pieces):
            for j, x in enumerate(piece.carrier):
                for z in piece.carrier[j + 1 :]:
                    pair = frozenset((arrow(x), arrow(z)))
                    if len(pair) < 2:
                        continue
                    edge = piece.has_edge(x, z)
                    if not edge and not reflecting:
                        continue
                    if pair in decided and decided[pair][0] != edge:
                        if not (reflecting and cls.injective):
                            return iter(())
                        u, v = sorted(pair, key=target.index)
                        return Obstruction(
                            "edge-disagreement",
                            (
                                ("pair", [element_to_json(u), element_to_json(v)]),
                                ("pieces", [decided[pair][1], i]),
                            ),
                        )
                    decided.setdefault(pair, (edge, i))
        edges = frozenset(p for p, (e, _) in decided.items() if e)
        free = [
            frozenset((u, v))
            for k, u in enumerate(target.carrier)
            for v in target.carrier[k + 1 :]
            if frozenset((u, v)) not in decided
        ]

        def generate() -> Iterator[StructObject]:
            for n in range(len(free) + 1):
                for extra in itertools.combinations(free, n):
                    yield StructObject(
                        StructKind.GRAPH, target.carrier, StructData(edges=edges | set(extra))
                    )

        return generate()

    return build


def _forced_endo(
    target: StructObject, pieces: Sequence[Piece]
) -> Union[Obstruction, Dict]:
    forced: Dict = {}
    for i, (piece, arrow) in enumerate(pieces):
        for x in piece.carrier:
            y, value = arrow(x), arrow(piece.sigma(x))
            if y in forced and forced[y][0] != value:
                return Obstruction(
                    "endomorphism-conflict",
                    (
                        ("element", element_to_json(y)),
                        ("images", [element_to_json(forced[y][0]), element_to_json(value)]),
                        ("pieces", [forced[y][1], i]),
                    ),
                )
            forced.setdefault(y, (value, i))
    return {y: value for y, (value, _) in forced.items()}


def _endo_extensions(dom: ConcreteCategory, kind: StructKind) -> StructureBuilder:
    """Endomorphisms on the target extending the ones the pieces force."""

    def build(target: StructObject, pieces: Sequence[Piece], cls: MorphismClass) -> BuildResult:
        forced = _forced_endo(target, pieces)
        if isinstance(forced, Obstruction):
            return forced if cls.injective else iter(())
        if kind == StructKind.SIGMA_GRAPH and cls.reflecting:
            for u, v in target.sorted_edges():
                if u in forced and v in forced:
                    su, sv = forced[u], forced[v]
                    if su == sv or not target.has_edge(su, sv):
                        return Obstruction(
                            "endomorphism-edge",
                            (
                                ("message", f"endomorphism would need edge {su}-{sv}"),
                                ("edge", [element_to_json(u), element_to_json(v)]),
                                ("image", [element_to_json(su), element_to_json(sv)]),
                            ),
                        )
        free = [x for x in target.carrier if x not in forced]

        def generate() -> Iterator[StructObject]:
            for values in itertools.product(target.carrier, repeat=len(free)):
                endo = dict(forced)
                endo.update(zip(free, values))
                obj = StructObject(
                    kind,
                    target.carrier,
                    StructData(
                        edges=target.data.edges, endo=tuple(endo[x] for x in target.carrier)
                    ),
                )
                if dom.contains(obj):
                    yield obj

        return generate()

    return build


def _form_extensions(bil: FinBilCategory) -> StructureBuilder:
    """Bilinear forms on the target restricting to every piece's form."""

    def build(target: StructObject, pieces: Sequence[Piece], cls: MorphismClass) -> BuildResult:
        apex = bil.make(int(target.data.dim or 0))
        forms = bil.forms_on(apex, [(p, arrow.table) for p, arrow in pieces])
        first = next(forms, None)
        if first is None:
            if not cls.injective:
                return iter(())
            return Obstruction("form-value-conflict", (("dim", target.data.dim),))
        return itertools.chain([first], forms)

    return build


def _connected_target(
    target: StructObject, pieces: Sequence[Piece], cls: MorphismClass
) -> BuildResult:
    return iter([target]) if is_connected(target) else iter(())


def _tagged(dom: CoproductCategory) -> StructureBuilder:
    def build(target: StructObject, pieces: Sequence[Piece], cls: MorphismClass) -> BuildResult:
        tags = sorted({p.data.tag for p, _ in pieces})
        if len(tags) > 1:
            return Obstruction("component-mismatch", (("tags", tags),))
        candidates = tags or list(range(len(dom.summands)))
        return iter([dom.wrap(t, target) for t in candidates if dom.summands[t].contains(target)])

    return build


# functor instances


def identity_functor(cat: ConcreteCategory, class_name: Optional[str] = None) -> ConcreteFunctor:
    """The identity functor on a category."""
    return ConcreteFunctor(
        f"identity-{cat.name}",
        cat,
        cat,
        lambda obj: obj,
        preserves_joins=True,
        reduct=True,
        dom_class_name=class_name,
        cod_class_name=class_name,
        structures=lambda target, pieces, cls: _same_target(target),
        description="identity",
    )


def graph_to_set(dom: FinGraphCategory, cod: FinSetCategory) -> ConcreteFunctor:
    """Forget the edges of a graph."""
    return ConcreteFunctor(
        "graph-to-set",
        dom,
        cod,
        lambda obj: StructObject(StructKind.SET, obj.carrier),
        preserves_joins=True,
        reduct=True,
        dom_class_name="emb",
        cod_class_name="inj",
        structures=_edge_copies(reflecting=True),
        description="underlying vertex set",
    )


def sigma_graph_to_graph(dom: SigmaGraphCategory, cod: FinGraphCategory) -> ConcreteFunctor:
    """Forget the endomorphism of a sigma-graph."""
    return ConcreteFunctor(
        "sigma-graph-to-graph",
        dom,
        cod,
        lambda obj: StructObject(StructKind.GRAPH, obj.carrier, StructData(edges=obj.data.edges)),
        preserves_joins=True,
        reduct=True,
        dom_class_name="emb",
        cod_class_name="emb",
        structures=_endo_extensions(dom, StructKind.SIGMA_GRAPH),
        description="underlying graph",
    )


def sigma_set_to_set(dom: SigmaSetCategory, cod: FinSetCategory) -> ConcreteFunctor:
    """Forget the endomorphism of a sigma-set."""
    return ConcreteFunctor(
        "sigma-set-to-set",
        dom,
        cod,
        lambda obj: StructObject(StructKind.SET, obj.carrier),
        preserves_joins=True,
        reduct=True,
        dom_class_name="inj",
        cod_class_name="inj",
        structures=_endo_extensions(dom, StructKind.SIGMA_SET),
        description="underlying set",
    )


def bil_to_vec(dom: FinBilCategory, cod: FinVecCategory) -> ConcreteFunctor:
    """Forget the bilinear form."""
    if dom.q != cod.q:
        raise ContractError("fields differ", {"dom": dom.q, "cod": cod.q})
    return ConcreteFunctor(
        "bil-to-vec",
        dom,
        cod,
        lambda obj: cod.make(int(obj.data.dim or 0)),
        preserves_joins=True,
        reduct=True,
        dom_class_name="emb",
        cod_class_name="inj",
        structures=_form_extensions(dom),
        description="underlying vector space",
    )


def bil_to_binfunc(dom: FinBilCategory, cod: FinBinFuncCategory) -> ConcreteFunctor:
    """The form as a binary function on the carrier."""
    if dom.q != cod.q:
        raise ContractError("fields differ", {"dom": dom.q, "cod": cod.q})
    return ConcreteFunctor(
        "bil-to-binfunc",
        dom,
        cod,
        lambda obj: cod.make(dom.form_table(obj).tolist(), obj.carrier),
        dom_class_name="emb",
        cod_class_name="mono",
        description="form values on the underlying set",
    )


def conn_inclusion(dom: FinGraphCategory, cod: FinGraphCategory) -> ConcreteFunctor:
    """Connected graphs inside all graphs."""
    return ConcreteFunctor(
        "conn-to-graph",
        dom,
        cod,
        lambda obj: obj,
        reduct=True,
        dom_class_name="emb",
        cod_class_name="emb",
        structures=_connected_target,
        description="full inclusion of connected graphs",
    )


def coproduct_fold(dom: CoproductCategory, cod: ConcreteCategory) -> ConcreteFunctor:
    """Each summand mapped identically into a common codomain."""
    if any(s is not cod for s in dom.summands):
        raise ContractError("every summand must be the codomain", {"cod": cod.name})
    return ConcreteFunctor(
        f"{cod.name}-fold",
        dom,
        cod,
        dom.inner,
        preserves_joins=True,
        dom_class_name=dom.default_class_name,
        cod_class_name=dom.default_class_name,
        structures=_tagged(dom),
        description="untag the components",
    )


class ComposedFunctor(ConcreteFunctor):
    """G after F."""

    def __init__(self, first: ConcreteFunctor, second: ConcreteFunctor) -> None:
        """Compose two functors; F's codomain must be G's domain."""
        if first.cod is not second.dom:
            raise ContractError(
                "functors do not compose", {"first": first.name, "second": second.name}
            )
        self.first = first
        self.second = second
        on_morphisms = None
        if not (first.carrier_preserving and second.carrier_preserving):
            on_morphisms = lambda f: second.morphism(first.morphism(f))  # noqa: E731
        super().__init__(
            f"{second.name}.{first.name}",
            first.dom,
            second.cod,
            lambda obj: second(first(obj)),
            on_morphisms=on_morphisms,
            faithful=first.faithful and second.faithful,
            preserves_joins=first.preserves_joins and second.preserves_joins,
            reduct=first.reduct and second.reduct,
            dom_class_name=first.dom_class_name,
            cod_class_name=second.cod_class_name,
            description=f"{second.name} after {first.name}",
        )


def compose_functors(first: ConcreteFunctor, second: ConcreteFunctor) -> ConcreteFunctor:
    """The composite second∘first."""
    return ComposedFunctor(first, second)


def functor_product(functors: Sequence[ConcreteFunctor]) -> ConcreteFunctor:
    """Tuple functors with a common domain into the product of their codomains."""
    if not functors:
        raise ContractError("functor_product needs at least one functor")
    dom = functors[0].dom
    if any(F.dom is not dom for F in functors):
        raise ContractError("functors have different domains")
    if len(functors) == 1:
        return functors[0]
    cod = ProductCategory(
        [F.cod for F in functors], [F.cod_class.name for F in functors]
    )
    members = tuple(functors)

    def on_morphisms(f: StructMorphism) -> StructMorphism:
        return cod.tuple_morphism(
            cod.make([F(f.dom) for F in members]),
            cod.make([F(f.cod) for F in members]),
            [F.morphism(f) for F in members],
        )

    return ConcreteFunctor(
        "<" + ", ".join(F.name for F in members) + ">",
        dom,
        cod,
        lambda obj: cod.make([F(obj) for F in members]),
        on_morphisms=on_morphisms,
        faithful=any(F.faithful for F in members),
        preserves_joins=all(F.preserves_joins for F in members),
        dom_class_name=members[0].dom_class_name,
        cod_class_name=cod.default_class_name,
        description="tupling of " + ", ".join(F.name for F in members),
    )


# audit


def _chains(
    cat: ConcreteCategory, cls: MorphismClass, objs: Sequence[StructObject], length: int
) -> Iterator[List[StructMorphism]]:
    def extend(chain: List[StructMorphism]) -> Iterator[List[StructMorphism]]:
        if chain:
            yield chain
        if len(chain) == length:
            return
        last = chain[-1].cod if chain else None
        starts = [last] if last is not None else list(objs)
        for x in starts:
            for y in objs:
                if y.size <= x.size:
                    continue
                for f in cat.hom_set(x, y, cls):
                    yield from extend(chain + [f])

    yield from extend([])


def _chain_diagram(chain: Sequence[StructMorphism]) -> Tuple[List[StructObject], List]:
    objects = [chain[0].dom] + [f.cod for f in chain]
    arrows = [(i, i + 1, f) for i, f in enumerate(chain)]
    return objects, arrows


def audit_functor(F: ConcreteFunctor, scope: Scope) -> Verdict:
    """Spot-check functoriality, the faithful flag and, for reducts, chain colimits."""
    verdict = Verdict(F.name, "audit-functor", VerdictStatus.HOLDS, scope)
    small = F.dom.objects(min(scope.max_object_size, 2))
    dom_cls, cod_cls = F.dom_class, F.cod_class

    def fail(**parts) -> Verdict:
        verdict.status = VerdictStatus.FAILS
        verdict.witness = {
            k: v.to_dict() if hasattr(v, "to_dict") else v for k, v in parts.items()
        }
        return verdict

    for x in small:
        verdict.obligations += 1
        image = F.morphism(identity(x))
        if image.table != identity(F(x)).table:
            return fail(object=x, reason="identity")
    for x, y, z in itertools.product(small, repeat=3):
        for f in F.dom.hom_set(x, y, dom_cls):
            if F.morphism(f) not in cod_cls:
                return fail(morphism=f, reason="class")
            for g in F.dom.hom_set(y, z, dom_cls):
                verdict.obligations += 1
                if F.morphism(compose(g, f)).table != compose(F.morphism(g), F.morphism(f)).table:
                    return fail(first=f, second=g, reason="composition")
    if F.faithful:
        for x, y in itertools.product(small, repeat=2):
            seen: Dict = {}
            for f in F.dom.hom_set(x, y):
                verdict.obligations += 1
                key = F.morphism(f).table
                if key in seen:
                    return fail(first=seen[key], second=f, reason="faithful")
                seen[key] = f
    if F.reduct:
        objs = F.dom.objects(min(scope.max_object_size, 3))
        for chain in _chains(F.dom, dom_cls, objs, scope.chain_length):
            objects, arrows = _chain_diagram(chain)
            glued = F.dom.glue(objects, arrows)
            if not isinstance(glued, Gluing):
                continue
            image_objects = [F(x) for x in objects]
            image_arrows = [(s, t, F.morphism(f)) for s, t, f in arrows]
            colimit = F.cod.glue(image_objects, image_arrows)
            if not isinstance(colimit, Gluing):
                return fail(chain=[f.to_dict() for f in chain], reason="no-colimit-in-codomain")
            verdict.obligations += 1
            comparison = F.cod.mediating(
                colimit.apex, colimit.legs, [F.morphism(leg) for leg in glued.legs]
            )
            if len(comparison) != 1 or not F.cod.is_iso(comparison[0]):
                return fail(chain=[f.to_dict() for f in chain], reason="colimit-not-preserved")
        verdict.notes.append(f"reduct certified on chains of length <= {scope.chain_length}")
    logger.info("audit %s: %s after %d obligations", F.name, verdict.status, verdict.obligations)
    return verdict
