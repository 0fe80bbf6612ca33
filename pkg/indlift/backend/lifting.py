"""Lifting independence relations along functors: the lift itself, reflection of
amalgamation, completions, horn amalgamation and multi-reflections."""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from indlift.backend.categories import (
    JOINS,
    Arrow,
    compose,
    identity,
    is_commuting_square,
)
from indlift.backend.checkers import (
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    SKIPPED,
    _fail,
    check_axiom,
    check_extensional_identity,
)
from indlift.backend.diagrams import (
    canonical_spans,
    diagonal_square,
    find_amalgam,
    horns,
    iter_cocones,
    join_bruteforce,
    orbit_representatives,
    same_subobject,
    tripods,
)
from indlift.backend.errors import (
    CapabilityError,
    ConstructionError,
    ContractError,
    MalformedDiagramError,
    ScopeExceededError,
)
from indlift.backend.functors import ConcreteFunctor, Piece, compose_functors
from indlift.backend.models import (
    UNIVERSAL_AXIOMS,
    Axiom,
    CommutingSquare,
    Cospan,
    Cube,
    Horn,
    Obstruction,
    Scope,
    Span,
    StructMorphism,
    StructObject,
    Subobject,
    Verdict,
    VerdictStatus,
)
from indlift.backend.relations import IndependenceRelation

logger = logging.getLogger(__name__)


def lift_relation(
    F: ConcreteFunctor, rel: IndependenceRelation, cls_name: Optional[str] = None
) -> IndependenceRelation:
    """Squares of F.dom whose image under F is independent."""
    if rel.category is not F.cod:
        raise ContractError(
            "relation does not live on the functor's codomain",
            {"functor": F.name, "relation": rel.name},
        )
    if rel.cls.name != F.cod_class.name:
        raise ContractError(
            "relation class differs from the functor's codomain class",
            {"relation": rel.cls.name, "functor": F.cod_class.name},
        )
    cls = F.dom.morphism_class(cls_name or F.dom_class.name)
    return IndependenceRelation(
        f"lift({F.name}, {rel.name})",
        F.dom,
        cls,
        lambda sq: rel.classify(F.square(sq)),
        f"squares whose image under {F.name} is {rel.name}-independent",
    )


def compose_lift_law_check(
    F: ConcreteFunctor, G: ConcreteFunctor, rel: IndependenceRelation, scope: Scope
) -> Verdict:
    """Lifting along F then G agrees with lifting along G after F."""
    stepwise = lift_relation(F, lift_relation(G, rel))
    direct = lift_relation(compose_functors(F, G), rel)
    verdict = check_extensional_identity(stepwise, direct, scope)
    verdict.check = "lift-law"
    return verdict


# amalgamation reflection


def check_reflects_amalgamation(F: ConcreteFunctor, scope: Scope) -> Verdict:
    """Squares over a common span that amalgamate after F already amalgamate before it."""
    if not F.faithful:
        raise ContractError("amalgamation reflection is checked for faithful functors")
    dom, cod = F.dom, F.cod
    dom_cls, cod_cls = F.dom_class, F.cod_class
    verdict = Verdict(F.name, "reflects-amalgamation", HOLDS, scope)
    undecided = 0
    try:
        for span in canonical_spans(
            dom, dom_cls, scope.max_object_size, scope.max_completion_size
        ):
            cocones = list(dom.tight_cocones(span, dom_cls, scope.max_completion_size))
            for c1, c2 in itertools.combinations(cocones, 2):
                sq1, sq2 = CommutingSquare(span, c1), CommutingSquare(span, c2)
                image = find_amalgam(cod, F.square(sq1), F.square(sq2), cod_cls, scope)
                if image.status != HOLDS:
                    continue
                verdict.obligations += 1
                amalgam = find_amalgam(dom, sq1, sq2, dom_cls, scope)
                if amalgam.status == FAILS:
                    _fail(verdict, squares=[sq1, sq2])
                    verdict.certificate = {
                        "domain": amalgam.certificate,
                        "image_amalgam": image.to_dict(),
                    }
                    return verdict
                if amalgam.status == INCONCLUSIVE:
                    undecided += 1
                    if verdict.status == HOLDS:
                        verdict.status = INCONCLUSIVE
                        verdict.witness = {"squares": [sq1.to_dict(), sq2.to_dict()]}
    except ScopeExceededError as exc:
        verdict.status = INCONCLUSIVE
        verdict.notes.append(f"scope exceeded: {exc}")
    if undecided:
        verdict.notes.append(f"{undecided} pairs neither amalgamated nor refuted")
    logger.info("%s reflects amalgamation: %s", F.name, verdict.status)
    return verdict


# completions


@dataclass(frozen=True)
class CompletionRequest:
    """A partial diagram asking for a completion of dimension 1, 2 or 3.

    Dimension 1 carries a dom object and a cod morphism out of its image.
    Dimension 2 carries a dom span and a cod cocone over its image.
    Dimension 3 carries a dom horn and cod legs from the images of N1, N2, N3.
    """

    dimension: int
    source: Optional[StructObject] = None
    arrow: Optional[StructMorphism] = None
    span: Optional[Span] = None
    cocone: Optional[Cospan] = None
    horn: Optional[Horn] = None
    legs: Tuple[StructMorphism, ...] = ()

    def pieces(self) -> Tuple[StructObject, List[Piece]]:
        """The object to complete and the dom objects mapping into it."""
        if self.dimension == 1:
            assert self.source is not None and self.arrow is not None
            return self.arrow.cod, [(self.source, self.arrow)]
        if self.dimension == 2:
            assert self.span is not None and self.cocone is not None
            return self.cocone.apex, [
                (self.span.left.cod, self.cocone.left),
                (self.span.right.cod, self.cocone.right),
            ]
        assert self.horn is not None
        h = self.horn
        tops = (h.a_to_n1.cod, h.a_to_n2.cod, h.b_to_n3.cod)
        return self.legs[0].cod, list(zip(tops, self.legs))

    def square(self, F: ConcreteFunctor) -> CommutingSquare:
        assert self.span is not None and self.cocone is not None
        return CommutingSquare(F.span(self.span), self.cocone)

    def cube(self, F: ConcreteFunctor) -> Cube:
        assert self.horn is not None
        return Cube(F.horn(self.horn), *self.legs)

    def validate(self, F: ConcreteFunctor, rel: IndependenceRelation) -> None:
        """Raise unless the request is well shaped and independent where required."""
        if self.dimension not in (1, 2, 3):
            raise MalformedDiagramError(f"no completions of dimension {self.dimension}")
        target, pieces = self.pieces()
        for obj, arrow in pieces:
            if arrow.dom != F(obj) or arrow.cod != target:
                raise MalformedDiagramError(
                    "request arrows must leave the images of their dom objects",
                    {"dimension": self.dimension},
                )
            if arrow not in rel.cls:
                raise ContractError("request arrow outside the relation's class")
        if self.dimension == 2:
            sq = self.square(F)
            if not is_commuting_square(sq):
                raise MalformedDiagramError("request square does not commute")
            if not rel.classify(sq):
                raise ContractError("request square is not independent")
        elif self.dimension == 3:
            cube = self.cube(F)
            faces = list(cube.horn.faces) + list(cube.top_faces)
            if not all(is_commuting_square(sq) for sq in faces):
                raise MalformedDiagramError("request cube does not commute")
            if not all(rel.classify(sq) for sq in faces):
                raise ContractError("request cube has a dependent face")

    def to_dict(self) -> Dict[str, Any]:
        """Convert the request to a dictionary for serialization."""
        payload: Dict[str, Any] = {"dimension": self.dimension}
        if self.source is not None:
            payload["source"] = self.source.to_dict()
        if self.arrow is not None:
            payload["arrow"] = self.arrow.to_dict()
        if self.span is not None:
            payload["span"] = self.span.to_dict()
        if self.cocone is not None:
            payload["cocone"] = self.cocone.to_dict()
        if self.horn is not None:
            payload["horn"] = self.horn.to_dict()
        if self.legs:
            payload["legs"] = [leg.to_dict() for leg in self.legs]
        return payload

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "CompletionRequest":
        """Rebuild a request from its dictionary form."""
        return cls(
            dimension=int(payload["dimension"]),
            source=StructObject.from_dict(payload["source"]) if "source" in payload else None,
            arrow=StructMorphism.from_dict(payload["arrow"]) if "arrow" in payload else None,
            span=Span.from_dict(payload["span"]) if "span" in payload else None,
            cocone=Cospan.from_dict(payload["cocone"]) if "cocone" in payload else None,
            horn=Horn.from_dict(payload["horn"]) if "horn" in payload else None,
            legs=tuple(StructMorphism.from_dict(p) for p in payload.get("legs", ())),
        )


@dataclass(frozen=True)
class CompletionResult:
    """A dom object E, h: target -> F(E), and one dom morphism per piece."""

    obj: StructObject
    h: StructMorphism
    maps: Tuple[StructMorphism, ...]
    method: str = "construction"

    def to_dict(self) -> Dict[str, Any]:
        """Convert the result to a dictionary for serialization."""
        return {
            "object": self.obj.to_dict(),
            "h": self.h.to_dict(),
            "maps": [f.to_dict() for f in self.maps],
            "method": self.method,
        }


def validate_completion(
    F: ConcreteFunctor,
    rel: IndependenceRelation,
    req: CompletionRequest,
    result: CompletionResult,
) -> bool:
    """Replay a completion: every piece arrow followed by h is the image of its map."""
    target, pieces = req.pieces()
    if result.h.dom != target or result.h.cod != F(result.obj) or result.h not in rel.cls:
        return False
    if len(result.maps) != len(pieces):
        return False
    for (obj, arrow), f in zip(pieces, result.maps):
        if f.dom != obj or f.cod != result.obj or f not in F.dom_class:
            return False
        if not F.dom.is_structure_map(f.dom, f.cod, f.table):
            return False
        if F.morphism(f).table != compose(result.h, arrow).table:
            return False
    return True


def _lift_pieces(
    F: ConcreteFunctor, obj: StructObject, h: StructMorphism, pieces: Sequence[Piece]
) -> Optional[Tuple[StructMorphism, ...]]:
    maps = []
    for piece, arrow in pieces:
        f = F.preimage(piece, obj, compose(h, arrow))
        if f is None:
            return None
        maps.append(f)
    return tuple(maps)


def complete(
    F: ConcreteFunctor, rel: IndependenceRelation, req: CompletionRequest, scope: Scope
) -> Tuple[VerdictStatus, Optional[CompletionResult], Optional[Dict[str, Any]]]:
    """Complete a request: instance construction first, then bounded search."""
    target, pieces = req.pieces()
    cls = rel.cls
    built = F.structure_on(target, pieces, cls)
    if isinstance(built, Obstruction):
        return FAILS, None, {"method": "decider", **built.to_dict()}
    for obj in itertools.islice(built, scope.max_homs):
        image = F(obj)
        if image.carrier != target.carrier:
            continue
        if not F.cod.is_structure_map(target, image, target.carrier):
            continue
        h = StructMorphism(target, image, target.carrier)
        if h not in cls:
            continue
        maps = _lift_pieces(F, obj, h, pieces)
        if maps is None:
            continue
        result = CompletionResult(obj, h, maps)
        if validate_completion(F, rel, req, result):
            return HOLDS, result, None
    low = target.size if cls.injective else 0
    high = min(scope.max_completion_size, target.size + 1)
    logger.debug("searching %s for a completion of size %d..%d", F.dom.name, low, high)
    for n in range(low, high + 1):
        for obj in F.dom.enumerate_objects(n):
            image = F(obj)
            for h in F.cod.hom_set(target, image, cls):
                maps = _lift_pieces(F, obj, h, pieces)
                if maps is None:
                    continue
                result = CompletionResult(obj, h, maps, method="search")
                if validate_completion(F, rel, req, result):
                    return HOLDS, result, None
    return INCONCLUSIVE, None, {"reason": "search-exhausted", "bound": high}


def find_completion(
    F: ConcreteFunctor, rel: IndependenceRelation, req: CompletionRequest, scope: Scope
) -> Verdict:
    """Completion of one request as a verdict; the result travels in the certificate."""
    req.validate(F, rel)
    verdict = Verdict(
        f"{F.name}/{rel.name}", f"completion-{req.dimension}", HOLDS, scope, obligations=1
    )
    status, result, certificate = complete(F, rel, req, scope)
    verdict.status = status
    if result is not None:
        verdict.certificate = {"completion": result.to_dict()}
    else:
        verdict.witness = {"request": req.to_dict()}
        verdict.certificate = certificate
    return verdict


def _image_independent_cocones(
    F: ConcreteFunctor, rel: IndependenceRelation, scope: Scope
):
    cache: Dict[Span, Tuple[Cospan, ...]] = {}

    def cocones_for(span: Span) -> Tuple[Cospan, ...]:
        if span not in cache:
            cache[span] = tuple(
                c
                for c in F.dom.tight_cocones(span, F.dom_class, scope.max_completion_size)
                if rel.classify(F.square(CommutingSquare(span, c)))
            )
        return cache[span]

    return cocones_for


def completion_requests(
    F: ConcreteFunctor,
    rel: IndependenceRelation,
    dimension: int,
    scope: Scope,
    diagonal: bool = False,
) -> Iterator[CompletionRequest]:
    """Every request of a dimension within scope, up to isomorphism of the target.

    With diagonal set, dimension 3 requests also need an independent diagonal square.
    """
    dom, cod, cls = F.dom, F.cod, rel.cls
    s, bound = scope.max_object_size, scope.max_completion_size
    if dimension == 1:
        for source in dom.objects(s):
            image = F(source)
            for target in cod.objects(s):
                for arrow in orbit_representatives(cod, cod.hom_set(image, target, cls)):
                    yield CompletionRequest(1, source=source, arrow=arrow)
    elif dimension == 2:
        for span in canonical_spans(dom, F.dom_class, s, bound):
            image = F.span(span)
            for cocone in cod.tight_cocones(image, cls, bound):
                if rel.classify(CommutingSquare(image, cocone)):
                    yield CompletionRequest(2, span=span, cocone=cocone)
    elif dimension == 3:
        cocones_for = _image_independent_cocones(F, rel, scope)
        for tripod in tripods(dom, F.dom_class, s, bound):
            for horn in horns(tripod, cocones_for):
                image = F.horn(horn)
                for glued in iter_cocones(
                    cod, list(image.objects), image.arrows, cls, bound, tops=[4, 5, 6], tight=True
                ):
                    legs = glued.legs[4:7]
                    cube = Cube(image, *legs)
                    squares = list(cube.top_faces)
                    if diagonal:
                        squares.append(diagonal_square(cube))
                    if all(rel.classify(sq) for sq in squares):
                        yield CompletionRequest(3, horn=horn, legs=tuple(legs))
    else:
        raise MalformedDiagramError(f"no completions of dimension {dimension}")


def _sweep_completions(
    F: ConcreteFunctor,
    rel: IndependenceRelation,
    scope: Scope,
    verdict: Verdict,
    requests: Iterator[CompletionRequest],
) -> None:
    undischarged = 0
    try:
        for req in requests:
            verdict.obligations += 1
            status, result, certificate = complete(F, rel, req, scope)
            if status == FAILS:
                _fail(verdict, request=req)
                verdict.certificate = certificate
                return
            if status == INCONCLUSIVE:
                undischarged += 1
                if verdict.status == HOLDS:
                    verdict.status = INCONCLUSIVE
                    verdict.witness = {"request": req.to_dict()}
                    verdict.certificate = certificate
            elif verdict.certificate is None and result is not None:
                verdict.certificate = {"sample": result.to_dict()}
    except ScopeExceededError as exc:
        verdict.status = INCONCLUSIVE
        verdict.notes.append(f"scope exceeded: {exc}")
    if undischarged:
        verdict.notes.append(f"{undischarged} requests without a completion in scope")


def check_completions(
    F: ConcreteFunctor, rel: IndependenceRelation, scope: Scope, dimension: int = 2
) -> Verdict:
    """Every enumerated request of one dimension has a completion."""
    verdict = Verdict(f"{F.name}/{rel.name}", f"completions-{dimension}", HOLDS, scope)
    _sweep_completions(F, rel, scope, verdict, completion_requests(F, rel, dimension, scope))
    logger.info("%s completions-%d: %s", F.name, dimension, verdict.status)
    return verdict


def insert_identities(F: ConcreteFunctor, req: CompletionRequest) -> CompletionRequest:
    """The request one dimension up whose completions restrict to completions of req."""
    if req.dimension == 1:
        assert req.source is not None and req.arrow is not None
        ident = identity(req.source)
        return CompletionRequest(2, span=Span(ident, ident), cocone=Cospan(req.arrow, req.arrow))
    if req.dimension == 2:
        assert req.span is not None and req.cocone is not None
        f, g = req.span.left, req.span.right
        ident = identity(req.span.apex)
        horn = Horn(ident, ident, ident, f, f, g, g, ident, ident)
        base_leg = compose(req.cocone.left, F.morphism(f))
        return CompletionRequest(3, horn=horn, legs=(req.cocone.left, req.cocone.right, base_leg))
    raise ContractError("identities are inserted into requests of dimension 1 or 2")


def project_completion(result: CompletionResult, dimension: int) -> CompletionResult:
    """Restrict a completion of the raised request back to the original dimension."""
    return CompletionResult(result.obj, result.h, result.maps[:dimension], result.method)


def completion_implication_check(
    F: ConcreteFunctor, rel: IndependenceRelation, scope: Scope
) -> Verdict:
    """Completions one dimension up restrict to completions, and agree with direct search."""
    verdict = Verdict(f"{F.name}/{rel.name}", "completion-implication", HOLDS, scope)
    premise = check_axiom(rel, Axiom.BASIC_EXISTENCE, scope)
    if not premise.holds:
        verdict.status = SKIPPED
        verdict.notes.append("basic existence does not hold for the relation")
        return verdict
    dependent = 0
    try:
        for dimension in (1, 2):
            for req in completion_requests(F, rel, dimension, scope):
                raised = insert_identities(F, req)
                try:
                    raised.validate(F, rel)
                except ContractError:
                    dependent += 1
                    continue
                verdict.obligations += 1
                status, result, _ = complete(F, rel, raised, scope)
                if status != HOLDS or result is None:
                    continue
                projected = project_completion(result, len(req.pieces()[1]))
                if not validate_completion(F, rel, req, projected):
                    return _fail(verdict, request=req, raised=raised, completion=result)
                direct, _, certificate = complete(F, rel, req, scope)
                if direct == FAILS:
                    _fail(verdict, request=req, raised=raised, completion=result)
                    verdict.certificate = certificate
                    return verdict
    except ScopeExceededError as exc:
        verdict.status = INCONCLUSIVE
        verdict.notes.append(f"scope exceeded: {exc}")
    if dependent:
        verdict.notes.append(f"{dependent} raised requests had a dependent face")
    return verdict


def check_horn_amalgamation(
    F: ConcreteFunctor, rel: IndependenceRelation, scope: Scope
) -> Verdict:
    """Horns in the image of F with an independent cube over them lift to the domain."""
    if not F.faithful:
        raise CapabilityError("horn amalgamation needs a faithful functor", {"functor": F.name})
    verdict = Verdict(f"{F.name}/{rel.name}", "horn-amalgamation", HOLDS, scope)
    verdict.notes.append(f"assumes amalgamation in {F.dom.name} within scope")
    _sweep_completions(
        F, rel, scope, verdict, completion_requests(F, rel, 3, scope, diagonal=True)
    )
    logger.info("%s horn amalgamation: %s", F.name, verdict.status)
    return verdict


# multi-reflections


@dataclass
class MultiReflection:
    """A family of arrows F(C_i) -> D through which every F(C) -> D factors uniquely."""

    functor: str
    target: StructObject
    family: Tuple[Tuple[StructObject, StructMorphism], ...]
    verdict: Verdict = field(repr=False)

    def to_dict(self) -> Dict[str, Any]:
        """Convert the family to a dictionary for serialization."""
        return {
            "functor": self.functor,
            "target": self.target.to_dict(),
            "family": [{"object": c.to_dict(), "arrow": e.to_dict()} for c, e in self.family],
            "verdict": self.verdict.to_dict(),
        }


def _factorizations(
    F: ConcreteFunctor, source: StructObject, e: StructMorphism, member: Tuple[StructObject, StructMorphism]
) -> List[StructMorphism]:
    obj, arrow = member
    return [
        f
        for f in F.dom.hom_set(source, obj, F.dom_class)
        if compose(arrow, F.morphism(f)).table == e.table
    ]


def multi_reflection_at(F: ConcreteFunctor, D: StructObject, scope: Scope) -> MultiReflection:
    """Group the arrows F(C) -> D by factorization and keep one terminal arrow per group."""
    verdict = Verdict(F.name, "multi-reflection", HOLDS, scope)
    candidates = [
        (obj, e)
        for obj in F.dom.objects(scope.max_object_size)
        for e in F.cod.hom_set(F(obj), D, F.cod_class)
    ]

    def factors(a: Tuple[StructObject, StructMorphism], b: Tuple[StructObject, StructMorphism]) -> bool:
        return bool(_factorizations(F, a[0], a[1], b))

    family: List[Tuple[StructObject, StructMorphism]] = []
    for cand in candidates:
        above = [other for other in candidates if factors(cand, other)]
        if not all(factors(other, cand) for other in above):
            continue
        if any(factors(cand, kept) for kept in family):
            continue
        family.append(cand)
    for obj, e in candidates:
        verdict.obligations += 1
        counts = [len(_factorizations(F, obj, e, member)) for member in family]
        if sum(counts) != 1:
            verdict.status = INCONCLUSIVE
            verdict.witness = {"object": obj.to_dict(), "arrow": e.to_dict(), "counts": counts}
            verdict.notes.append("no family with unique factorizations within scope")
            break
    if verdict.holds:
        verdict.notes.append(f"multiadjoint within size {scope.max_object_size}")
    logger.debug("%s at %s: family of %d", F.name, D.carrier, len(family))
    return MultiReflection(F.name, D, tuple(family), verdict)


def check_multiadjoint(F: ConcreteFunctor, scope: Scope) -> Verdict:
    """A multi-reflection exists at every codomain object within scope."""
    verdict = Verdict(F.name, "multiadjoint", HOLDS, scope)
    for D in F.cod.objects(scope.max_object_size):
        mr = multi_reflection_at(F, D, scope)
        verdict.obligations += mr.verdict.obligations
        if not mr.verdict.holds:
            verdict.status = INCONCLUSIVE
            verdict.witness = {"target": D.to_dict(), **(mr.verdict.witness or {})}
            return verdict
    verdict.notes.append(f"multiadjoint within size {scope.max_object_size}")
    return verdict


@dataclass(frozen=True)
class CoconeFactorization:
    """A dom cocone X_j -> C with the family arrow u: F(C) -> D it is read through."""

    apex: StructObject
    legs: Tuple[StructMorphism, ...]
    mediating: StructMorphism
    member: int

    def to_dict(self) -> Dict[str, Any]:
        """Convert the factorization to a dictionary for serialization."""
        return {
            "apex": self.apex.to_dict(),
            "legs": [f.to_dict() for f in self.legs],
            "mediating": self.mediating.to_dict(),
            "member": self.member,
        }


def _connected(n: int, arrows: Sequence[Arrow]) -> bool:
    if n == 0:
        return False
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for s, t, _ in arrows:
            for a, b in ((s, t), (t, s)):
                if a == i and b not in seen:
                    seen.add(b)
                    frontier.append(b)
    return len(seen) == n


def cocone_factorization(
    F: ConcreteFunctor,
    mr: MultiReflection,
    objects: Sequence[StructObject],
    arrows: Sequence[Arrow],
    legs: Sequence[StructMorphism],
) -> CoconeFactorization:
    """Factor a cocone over the image of a connected diagram through one family arrow."""
    if not _connected(len(objects), arrows):
        raise ContractError("diagram must be nonempty and connected")
    if not mr.verdict.holds:
        raise CapabilityError("multi-reflection is not verified", {"functor": mr.functor})
    if len(legs) != len(objects) or any(leg.cod != mr.target for leg in legs):
        raise MalformedDiagramError("cocone legs must run from each image into the target")
    for i, member in enumerate(mr.family):
        first = _factorizations(F, objects[0], legs[0], member)
        if not first:
            continue
        found = []
        for obj, leg in zip(objects, legs):
            fs = _factorizations(F, obj, leg, member)
            if len(fs) != 1:
                raise ConstructionError(
                    "cocone leg does not factor uniquely through the family",
                    {"member": i, "factorizations": len(fs)},
                )
            found.append(fs[0])
        for s, t, x in arrows:
            if compose(found[t], x).table != found[s].table:
                raise ConstructionError("factored legs do not form a cocone", {"arrow": [s, t]})
        return CoconeFactorization(member[0], tuple(found), member[1], i)
    raise ConstructionError("no family arrow receives the cocone")


def comparison_morphisms(
    F: ConcreteFunctor,
    factorization: CoconeFactorization,
    competitor_legs: Sequence[StructMorphism],
    competitor_mediating: StructMorphism,
) -> List[StructMorphism]:
    """Every g from the competitor apex with f_j = g∘f'_j and u∘F(g) = u'."""
    apex = competitor_legs[0].cod
    return [
        g
        for g in F.dom.hom_set(apex, factorization.apex, F.dom_class)
        if all(
            compose(g, f2).table == f.table
            for f, f2 in zip(factorization.legs, competitor_legs)
        )
        and compose(factorization.mediating, F.morphism(g)).table == competitor_mediating.table
    ]


# joins and the basic properties


def preserves_joins_check(F: ConcreteFunctor, scope: Scope) -> Verdict:
    """F sends the join of two subobjects to the join of their images."""
    F.dom.require(JOINS)
    F.cod.require(JOINS)
    verdict = Verdict(F.name, "preserves-joins", HOLDS, scope)
    dom_cls, cod_cls = F.dom_class, F.cod_class
    for X in F.dom.objects(scope.max_object_size):
        image = F(X)
        for a, b in itertools.combinations_with_replacement(F.dom.subobjects_of(X, dom_cls), 2):
            verdict.obligations += 1
            joined = join_bruteforce(F.dom, a, b, dom_cls)
            left = Subobject(image, F.morphism(joined.rep))
            right = join_bruteforce(
                F.cod,
                Subobject(image, F.morphism(a.rep)),
                Subobject(image, F.morphism(b.rep)),
                cod_cls,
            )
            if not same_subobject(F.cod, left, right):
                return _fail(verdict, left=a, right=b, image_of_join=left, join_of_images=right)
    return verdict


def check_lifting_basic_properties(
    F: ConcreteFunctor, rel: IndependenceRelation, scope: Scope
) -> Verdict:
    """Universal axioms holding for rel also hold for its lift."""
    lifted = lift_relation(F, rel)
    verdict = Verdict(lifted.name, "lifting-basic-properties", HOLDS, scope)
    for axiom in sorted(UNIVERSAL_AXIOMS - {Axiom.SEMI_INVARIANCE}, key=lambda a: a.value):
        below = check_axiom(rel, axiom, scope)
        if not below.holds:
            continue
        above = check_axiom(lifted, axiom, scope)
        verdict.obligations += above.obligations
        if above.status == FAILS:
            verdict.status = FAILS
            verdict.witness = {"axiom": axiom.value, **(above.witness or {})}
            return verdict
        if above.status != HOLDS and verdict.status == HOLDS:
            verdict.status = INCONCLUSIVE
            verdict.notes.append(f"{axiom} inconclusive on the lift")
    return verdict
