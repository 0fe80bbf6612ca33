"""Diagram enumeration and constructions: subobject lattices, spans, horns, amalgams,
multipushouts and joins."""
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import (
    Any,
    Callable,
    Dict,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from indlift.backend.categories import (
    FACTORIZATION,
    MULTIPUSHOUT,
    Arrow,
    ConcreteCategory,
    FactorizationSystem,
    Gluing,
    GlueResult,
    compose,
    identity,
)
from indlift.backend.errors import (
    ConstructionError,
    ContractError,
    MalformedDiagramError,
)
from indlift.backend.models import (
    CommutingSquare,
    Cospan,
    Cube,
    Horn,
    MorphismClass,
    Obstruction,
    Scope,
    Span,
    StructMorphism,
    StructObject,
    Subobject,
    Verdict,
    VerdictStatus,
)

logger = logging.getLogger(__name__)

Tripod = Tuple[StructMorphism, StructMorphism, StructMorphism]


class SubobjectLattice:
    """The poset of cls-subobjects of one ambient object."""

    def __init__(
        self, cat: ConcreteCategory, ambient: StructObject, cls: Optional[MorphismClass] = None
    ) -> None:
        """Initialize the lattice from the category's subobject enumeration."""
        self.cat = cat
        self.ambient = ambient
        self.cls = cls or cat.default_class
        self.subobjects = cat.subobjects_of(ambient, self.cls)
        self.keys = [cat.subobject_key(s.rep) for s in self.subobjects]
        n = len(self.subobjects)
        self.leq = np.zeros((n, n), dtype=bool)
        for i, (vi, ei) in enumerate(self.keys):
            for j, (vj, ej) in enumerate(self.keys):
                self.leq[i, j] = vi <= vj and ei <= ej
        self._index = {key: i for i, key in enumerate(self.keys)}
        self._factors: Dict[Tuple[int, int], StructMorphism] = {}
        tops = [i for i in range(n) if self.leq[:, i].all()]
        bottoms = [i for i in range(n) if self.leq[i, :].all()]
        self.top = tops[0] if tops else None
        self.bottom = bottoms[0] if bottoms else None

    def __len__(self) -> int:
        return len(self.subobjects)

    def index_of(self, rep: StructMorphism) -> int:
        """Position of the subobject represented by rep."""
        key = self.cat.subobject_key(rep)
        if key not in self._index:
            raise ContractError("morphism does not represent a subobject of the ambient")
        return self._index[key]

    def below(self, i: int) -> List[int]:
        """Indices j with j <= i."""
        return [int(j) for j in np.nonzero(self.leq[:, i])[0]]

    def above(self, i: int) -> List[int]:
        """Indices j with i <= j."""
        return [int(j) for j in np.nonzero(self.leq[i, :])[0]]

    def size(self, i: int) -> int:
        return self.subobjects[i].obj.size

    def factor(self, i: int, j: int) -> StructMorphism:
        """The inclusion of subobject i into subobject j."""
        if (i, j) not in self._factors:
            if not self.leq[i, j]:
                raise ContractError(f"subobject {i} is not below subobject {j}")
            h = self.cat.factor_through(self.subobjects[i].rep, self.subobjects[j].rep)
            if h is None:
                raise ConstructionError("ordered subobjects without a factorization")
            self._factors[(i, j)] = h
        return self._factors[(i, j)]

    def _extreme(self, candidates: List[int], least: bool) -> Optional[int]:
        for k in candidates:
            row = self.leq[k, candidates] if least else self.leq[candidates, k]
            if row.all():
                return k
        return None

    def join(self, i: int, j: int) -> Optional[int]:
        """Least common upper bound, if there is one."""
        upper = [int(k) for k in np.nonzero(self.leq[i, :] & self.leq[j, :])[0]]
        return self._extreme(upper, least=True)

    def meet(self, i: int, j: int) -> Optional[int]:
        """Greatest common lower bound, if there is one."""
        lower = [int(k) for k in np.nonzero(self.leq[:, i] & self.leq[:, j])[0]]
        return self._extreme(lower, least=False)

    def square(self, c: int, a: int, b: int, m: int) -> CommutingSquare:
        """The square of inclusions c <= a, b <= m."""
        return CommutingSquare(
            Span(self.factor(c, a), self.factor(c, b)),
            Cospan(self.factor(a, m), self.factor(b, m)),
        )

    def squares(self) -> Iterator[Tuple[int, int, int, int]]:
        """Every (c, a, b, m) with c below a and b, both below m."""
        for m in range(len(self)):
            below_m = self.below(m)
            for a in below_m:
                for b in below_m:
                    for c in self.below(a):
                        if self.leq[c, b]:
                            yield c, a, b, m


def orbit_representatives(
    cat: ConcreteCategory, homs: Sequence[StructMorphism]
) -> List[StructMorphism]:
    """One morphism per orbit under automorphisms of the common codomain."""
    if not homs:
        return []
    autos = cat.automorphisms(homs[0].cod)
    seen: set = set()
    reps = []
    for f in homs:
        if f.table in seen:
            continue
        reps.append(f)
        seen.update(compose(sigma, f).table for sigma in autos)
    return reps


@lru_cache(maxsize=4096)
def _leg_orbits(
    cat: ConcreteCategory, dom: StructObject, cod: StructObject, cls: MorphismClass
) -> Tuple[StructMorphism, ...]:
    return tuple(orbit_representatives(cat, cat.hom_set(dom, cod, cls)))


def canonical_spans(
    cat: ConcreteCategory,
    cls: MorphismClass,
    max_size: int,
    amalgam_bound: Optional[int] = None,
) -> Iterator[Span]:
    """Spans C -> A, C -> B up to isomorphism of the legs' codomains, smallest first.

    When amalgam_bound is set, spans whose free amalgam |A| + |B| - |C| exceeds it
    are skipped.
    """
    objs = cat.objects(max_size)
    triples = [
        (c, a, b)
        for c, a, b in itertools.product(range(len(objs)), repeat=3)
        if objs[c].size <= min(objs[a].size, objs[b].size)
        and (
            amalgam_bound is None
            or objs[a].size + objs[b].size - objs[c].size <= amalgam_bound
        )
    ]
    triples.sort(key=lambda t: (sum(objs[i].size for i in t), t))
    for c, a, b in triples:
        for f in _leg_orbits(cat, objs[c], objs[a], cls):
            for g in _leg_orbits(cat, objs[c], objs[b], cls):
                yield Span(f, g)


def tripods(
    cat: ConcreteCategory,
    cls: MorphismClass,
    max_size: int,
    amalgam_bound: Optional[int] = None,
) -> Iterator[Tripod]:
    """Triples of legs M -> A, M -> B, M -> C, smallest first."""
    objs = cat.objects(max_size)
    quads = [
        q
        for q in itertools.product(range(len(objs)), repeat=4)
        if objs[q[0]].size <= min(objs[i].size for i in q[1:])
        and (
            amalgam_bound is None
            or sum(objs[i].size for i in q[1:]) - 2 * objs[q[0]].size <= amalgam_bound
        )
    ]
    quads.sort(key=lambda q: (sum(objs[i].size for i in q), q))
    for m, a, b, c in quads:
        for to_a in _leg_orbits(cat, objs[m], objs[a], cls):
            for to_b in _leg_orbits(cat, objs[m], objs[b], cls):
                for to_c in _leg_orbits(cat, objs[m], objs[c], cls):
                    yield to_a, to_b, to_c


def horns(
    tripod: Tripod, cocones_for: Callable[[Span], Sequence[Cospan]]
) -> Iterator[Horn]:
    """Every horn on a tripod whose faces are drawn from cocones_for."""
    to_a, to_b, to_c = tripod
    for n1 in cocones_for(Span(to_a, to_b)):
        for n2 in cocones_for(Span(to_a, to_c)):
            for n3 in cocones_for(Span(to_b, to_c)):
                yield Horn(
                    to_a, to_b, to_c, n1.left, n1.right, n2.left, n2.right, n3.left, n3.right
                )


def glue_horn(cat: ConcreteCategory, horn: Horn) -> GlueResult:
    """The colimit of a horn."""
    return cat.glue(list(horn.objects), horn.arrows)


def cube_from_legs(horn: Horn, legs: Sequence[StructMorphism]) -> Cube:
    """Complete a horn with the legs of a cocone over its seven objects."""
    return Cube(horn, legs[4], legs[5], legs[6])


def diagonal_square(cube: Cube) -> CommutingSquare:
    """A and N3 over M inside the apex N."""
    h = cube.horn
    return CommutingSquare(
        Span(h.m_to_a, compose(h.b_to_n3, h.m_to_b)),
        Cospan(compose(cube.n1_to_n, h.a_to_n1), cube.n3_to_n),
    )


def _derive_legs(
    n: int, arrows: Sequence[Arrow], assigned: Dict[int, StructMorphism]
) -> Optional[Dict[int, StructMorphism]]:
    """Extend legs backwards along arrows; None on a disagreement."""
    legs = dict(assigned)
    for _ in range(n):
        changed = False
        for s, t, f in arrows:
            if t not in legs:
                continue
            candidate = compose(legs[t], f)
            if s in legs:
                if legs[s].table != candidate.table:
                    return None
            else:
                legs[s] = candidate
                changed = True
        if not changed:
            break
    return legs


def iter_cocones(
    cat: ConcreteCategory,
    objects: Sequence[StructObject],
    arrows: Sequence[Arrow],
    cls: MorphismClass,
    max_size: int,
    tops: Optional[Sequence[int]] = None,
    tight: bool = False,
) -> Iterator[Gluing]:
    """Every cocone up to max_size whose legs from the top objects lie in cls.

    With tight set, only cocones whose top legs jointly generate the apex are kept.
    """
    n = len(objects)
    sources = {s for s, _, _ in arrows}
    tops = list(tops) if tops is not None else [i for i in range(n) if i not in sources]
    for apex in cat.objects(max_size):
        choices = [cat.hom_set(objects[i], apex, cls) for i in tops]

        def extend(k: int, assigned: Dict[int, StructMorphism]) -> Iterator[Dict]:
            if k == len(tops):
                yield assigned
                return
            for leg in choices[k]:
                trial = dict(assigned)
                trial[tops[k]] = leg
                derived = _derive_legs(n, arrows, trial)
                if derived is not None:
                    yield from extend(k + 1, derived)

        for legs in extend(0, {}):
            if len(legs) != n:
                continue
            if tight and not cat.is_tight([legs[i] for i in tops]):
                continue
            yield Gluing(apex, tuple(legs[i] for i in range(n)))


def search_cocone(
    cat: ConcreteCategory,
    objects: Sequence[StructObject],
    arrows: Sequence[Arrow],
    cls: MorphismClass,
    max_size: int,
    tops: Optional[Sequence[int]] = None,
) -> Optional[Gluing]:
    """Bounded search for a cocone whose legs from the top objects lie in cls."""
    return next(iter_cocones(cat, objects, arrows, cls, max_size, tops), None)


@dataclass(frozen=True)
class Amalgam:
    """Outcome of amalgamating two squares over a common span."""

    status: VerdictStatus
    apex: Optional[StructObject] = None
    legs: Tuple[StructMorphism, ...] = ()
    certificate: Optional[Dict[str, Any]] = None
    method: str = "glue"

    def to_dict(self) -> Dict[str, Any]:
        """Convert the amalgam to a dictionary for serialization."""
        payload: Dict[str, Any] = {"status": self.status.value, "method": self.method}
        if self.apex is not None:
            payload["apex"] = self.apex.to_dict()
            payload["legs"] = [leg.to_dict() for leg in self.legs]
        if self.certificate is not None:
            payload["certificate"] = self.certificate
        return payload


def colimit_defects(
    cat: ConcreteCategory, legs: Sequence[StructMorphism], cls: MorphismClass
) -> Dict[str, Any]:
    """Certificate for colimit legs outside a left-cancellable class."""
    defects = {str(i): cat.leg_defects(leg, cls) for i, leg in enumerate(legs) if leg not in cls}
    kinds = sorted({k for found in defects.values() for k in found})
    return {
        "reason": kinds[0] if kinds else "colimit-legs-outside-class",
        "class": cls.name,
        "defects": defects,
    }


def find_amalgam(
    cat: ConcreteCategory,
    sq1: CommutingSquare,
    sq2: CommutingSquare,
    cls: Optional[MorphismClass] = None,
    scope: Optional[Scope] = None,
) -> Amalgam:
    """Find E with maps from both apexes agreeing on A and B."""
    if sq1.span != sq2.span:
        raise MalformedDiagramError("squares do not share a base span")
    cls = cls or cat.default_class
    scope = scope or Scope()
    if sq1.cocone == sq2.cocone:
        return Amalgam(VerdictStatus.HOLDS, sq1.m, (identity(sq1.m), identity(sq1.m)), method="identical")
    f, g, l1, r1 = sq1.morphisms
    l2, r2 = sq2.cocone.left, sq2.cocone.right
    objects = [sq1.c, sq1.a, sq1.b, sq1.m, sq2.m]
    arrows = [(0, 1, f), (0, 2, g), (1, 3, l1), (2, 3, r1), (1, 4, l2), (2, 4, r2)]
    glued = cat.glue(objects, arrows)
    if isinstance(glued, Obstruction):
        return Amalgam(VerdictStatus.FAILS, certificate=glued.to_dict(), method="decider")
    if isinstance(glued, Gluing):
        u1, u2 = glued.legs[3], glued.legs[4]
        if u1 in cls and u2 in cls:
            return Amalgam(VerdictStatus.HOLDS, glued.apex, (u1, u2))
        if cls.left_cancellable:
            return Amalgam(
                VerdictStatus.FAILS, certificate=colimit_defects(cat, [u1, u2], cls), method="decider"
            )
    logger.warning("no exact amalgam in %s; searching up to size %d", cat.name, scope.max_completion_size)
    found = search_cocone(cat, objects, arrows, cls, scope.max_completion_size, tops=[3, 4])
    if found is not None:
        return Amalgam(VerdictStatus.HOLDS, found.apex, (found.legs[3], found.legs[4]), method="search")
    return Amalgam(
        VerdictStatus.INCONCLUSIVE,
        certificate={"reason": "search-exhausted", "bound": scope.max_completion_size},
        method="search",
    )


def amalgamate_squares(
    cat: ConcreteCategory,
    sq1: CommutingSquare,
    sq2: CommutingSquare,
    scope: Scope,
    cls: Optional[MorphismClass] = None,
) -> Verdict:
    """Amalgamation of two squares as a verdict."""
    cls = cls or cat.default_class
    amalgam = find_amalgam(cat, sq1, sq2, cls, scope)
    verdict = Verdict(f"{cat.name}/{cls.name}", "amalgamation", amalgam.status, scope, obligations=1)
    if amalgam.status == VerdictStatus.HOLDS:
        verdict.certificate = amalgam.to_dict()
    else:
        verdict.witness = {"squares": [sq1.to_dict(), sq2.to_dict()]}
        verdict.certificate = amalgam.certificate
    return verdict


def multipushout(
    cat: ConcreteCategory,
    span: Span,
    cls: Optional[MorphismClass] = None,
    scope: Optional[Scope] = None,
) -> List[Cospan]:
    """Instances of the multipushout of a span.

    Without a class this is the pushout when it exists; with a class the instances
    are the tight cocones with legs in cls that receive no map from another one.
    """
    cat.require(MULTIPUSHOUT)
    scope = scope or Scope()
    if cls is None:
        glued = cat.glue(
            [span.apex, span.left.cod, span.right.cod],
            [(0, 1, span.left), (0, 2, span.right)],
        )
        if isinstance(glued, Gluing):
            return [Cospan(glued.legs[1], glued.legs[2])]
        if isinstance(glued, Obstruction):
            return []
        logger.warning("%s has no pushout of this span; enumerating cocones", cat.name)
        cls = cat.default_class
    cocones = list(cat.tight_cocones(span, cls, scope.max_completion_size))
    instances = []
    for i, cocone in enumerate(cocones):
        dominated = any(
            cat.mediating(other.apex, [other.left, other.right], [cocone.left, cocone.right], cls)
            for j, other in enumerate(cocones)
            if j != i
        )
        if not dominated:
            instances.append(cocone)
    logger.debug("%d tight cocones, %d instances", len(cocones), len(instances))
    return instances


def verify_multipushout(
    cat: ConcreteCategory,
    span: Span,
    instances: Sequence[Cospan],
    scope: Scope,
    cls: Optional[MorphismClass] = None,
) -> Verdict:
    """Count factorizations of every cocone up to scope through the instances."""
    f, g = span.left, span.right
    verdict = Verdict(f"{cat.name}/{cls.name if cls else 'all'}", "multipushout", VerdictStatus.HOLDS, scope)
    for d in cat.objects(scope.max_object_size):
        for l in cat.hom_set(f.cod, d, cls):
            left = compose(l, f).table
            for r in cat.hom_set(g.cod, d, cls):
                if compose(r, g).table != left:
                    continue
                verdict.obligations += 1
                counts = [
                    len(cat.mediating(inst.apex, [inst.left, inst.right], [l, r], cls))
                    for inst in instances
                ]
                if sum(counts) != 1:
                    verdict.status = VerdictStatus.FAILS
                    verdict.witness = {"cocone": Cospan(l, r).to_dict(), "counts": counts}
                    return verdict
    return verdict


def factorize(fs: FactorizationSystem, f: StructMorphism) -> Tuple[StructMorphism, StructMorphism]:
    """(e, m) with m after e equal to f."""
    return fs.factorize(f)


def subobjects(
    cat: ConcreteCategory, ambient: StructObject, system: Optional[str] = None
) -> Tuple[Subobject, ...]:
    """Subobjects in the m-class of a factorization system."""
    fs = cat.factorization_system(system)
    return cat.subobjects_of(ambient, fs.m_class)


def join_bruteforce(
    cat: ConcreteCategory, a: Subobject, b: Subobject, cls: Optional[MorphismClass] = None
) -> Subobject:
    """The least subobject above both, found by scanning the lattice."""
    if a.ambient != b.ambient:
        raise ContractError("subobjects live in different ambients")
    lattice = SubobjectLattice(cat, a.ambient, cls)
    k = lattice.join(lattice.index_of(a.rep), lattice.index_of(b.rep))
    if k is None:
        raise ConstructionError("subobjects have no join", {"ambient": a.ambient.to_dict()})
    return lattice.subobjects[k]


def join_via_multipushout(
    cat: ConcreteCategory,
    a: Subobject,
    b: Subobject,
    system: Optional[str] = None,
    scope: Optional[Scope] = None,
) -> Subobject:
    """Join from the multipushout instance over the pullback that maps into the ambient."""
    cat.require(MULTIPUSHOUT)
    cat.require(FACTORIZATION)
    if a.ambient != b.ambient:
        raise ContractError("subobjects live in different ambients")
    fs = cat.factorization_system(system)
    span = cat.pullback(Cospan(a.rep, b.rep)).span
    maps = [
        u
        for inst in multipushout(cat, span, scope=scope)
        for u in cat.mediating(inst.apex, [inst.left, inst.right], [a.rep, b.rep])
    ]
    if len(maps) != 1:
        raise ConstructionError(
            "expected exactly one instance mapping into the ambient", {"found": len(maps)}
        )
    _, m = fs.factorize(maps[0])
    return Subobject(a.ambient, m)


def same_subobject(cat: ConcreteCategory, a: Subobject, b: Subobject) -> bool:
    """Whether two representatives name the same subobject."""
    return a.ambient == b.ambient and cat.subobject_key(a.rep) == cat.subobject_key(b.rep)
