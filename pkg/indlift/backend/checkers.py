"""Bounded and exact checkers for the axioms of an independence relation."""
import itertools
import logging
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Tuple

from indlift.backend.categories import ConcreteCategory, Gluing, compose, identity
from indlift.backend.diagrams import (
    SubobjectLattice,
    canonical_spans,
    colimit_defects,
    cube_from_legs,
    diagonal_square,
    find_amalgam,
    glue_horn,
    horns,
    iter_cocones,
    join_bruteforce,
    join_via_multipushout,
    same_subobject,
    tripods,
)
from indlift.backend.errors import CapabilityError, ContractError, ScopeExceededError
from indlift.backend.models import (
    Axiom,
    CommutingSquare,
    Cospan,
    Cube,
    Horn,
    MorphismClass,
    Obstruction,
    Scope,
    Span,
    StructKind,
    StructMorphism,
    Verdict,
    VerdictStatus,
)
from indlift.backend.relations import IndependenceRelation

logger = logging.getLogger(__name__)

HOLDS = VerdictStatus.HOLDS
FAILS = VerdictStatus.FAILS
INCONCLUSIVE = VerdictStatus.INCONCLUSIVE
SKIPPED = VerdictStatus.SKIPPED

NSOP1_AXIOMS = (
    Axiom.INVARIANCE,
    Axiom.MONOTONICITY,
    Axiom.TRANSITIVITY,
    Axiom.SYMMETRY,
    Axiom.EXISTENCE,
    Axiom.THREE_AMALGAMATION,
    Axiom.UNION_FINITE_CHAIN,
)
SIMPLE_AXIOMS = NSOP1_AXIOMS + (Axiom.BASE_MONOTONICITY,)
STABLE_AXIOMS = SIMPLE_AXIOMS + (Axiom.UNIQUENESS,)

# ambients for the chain sweep stay small; chains grow with the lattice height
UNION_AMBIENT_CAP = 3

Index = Tuple[int, int, int, int]


class Sweep:
    """Caches shared by the checks run against one relation at one scope."""

    def __init__(self, rel: IndependenceRelation, scope: Scope) -> None:
        """Initialize empty caches for the relation."""
        self.rel = rel
        self.cat: ConcreteCategory = rel.category
        self.cls: MorphismClass = rel.cls
        self.scope = scope
        self._lattices: Dict[Any, SubobjectLattice] = {}
        self._classified: Dict[Tuple[Any, int, int, int, int], bool] = {}
        self._cocones: Dict[Span, Tuple[Cospan, ...]] = {}

    @property
    def lattice_mode(self) -> bool:
        """Whether squares can be enumerated as subobject squares."""
        return self.cls.injective

    def ambients(self, cap: Optional[int] = None) -> Tuple:
        size = self.scope.max_object_size if cap is None else min(cap, self.scope.max_object_size)
        return self.cat.objects(size)

    def lattice(self, obj) -> SubobjectLattice:
        if obj not in self._lattices:
            self._lattices[obj] = SubobjectLattice(self.cat, obj, self.cls)
            logger.debug(
                "%s: %d subobjects of %s", self.rel.name, len(self._lattices[obj]), obj.carrier
            )
        return self._lattices[obj]

    def independent(self, lat: SubobjectLattice, c: int, a: int, b: int, m: int) -> bool:
        """Classify a lattice square, memoized by its indices."""
        key = (lat.ambient, c, a, b, m)
        if key not in self._classified:
            self._classified[key] = self.rel.classify(lat.square(c, a, b, m))
        return self._classified[key]

    def lattice_squares(self, cap: Optional[int] = None) -> Iterator[Tuple[SubobjectLattice, Index]]:
        for obj in self.ambients(cap):
            lat = self.lattice(obj)
            for index in lat.squares():
                yield lat, index

    def independent_cocones(self, span: Span) -> Tuple[Cospan, ...]:
        """Tight cocones over the span whose square is independent, in enumeration order."""
        if span not in self._cocones:
            self._cocones[span] = tuple(
                cocone
                for cocone in self.cat.tight_cocones(
                    span, self.cls, self.scope.max_completion_size
                )
                if self.rel.classify(CommutingSquare(span, cocone))
            )
            logger.debug("%d independent cocones over a span", len(self._cocones[span]))
        return self._cocones[span]

    def spans(self) -> Iterator[Span]:
        return canonical_spans(
            self.cat, self.cls, self.scope.max_object_size, self.scope.max_completion_size
        )

    def horns(self) -> Iterator[Horn]:
        for tripod in tripods(
            self.cat, self.cls, self.scope.max_object_size, self.scope.max_completion_size
        ):
            yield from horns(tripod, self.independent_cocones)


def _fail(verdict: Verdict, **parts: Any) -> Verdict:
    verdict.status = FAILS
    verdict.witness = {k: _encode(v) for k, v in parts.items()}
    return verdict


def _encode(value: Any) -> Any:
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if hasattr(value, "to_dict"):
        return value.to_dict()
    return value


def post_compose(sq: CommutingSquare, h: StructMorphism) -> CommutingSquare:
    """The square with its cocone followed by h."""
    return CommutingSquare(
        sq.span, Cospan(compose(h, sq.cocone.left), compose(h, sq.cocone.right))
    )


def general_squares(
    cat: ConcreteCategory, cls: MorphismClass, max_size: int
) -> Iterator[CommutingSquare]:
    """Every commuting square of cls-morphisms between objects up to max_size.

    Corner objects are ordered by apex size, then by the larger side, the sides'
    total, the base and the sides; morphisms follow hom-set order.
    """
    objs = cat.objects(max_size)
    quads = list(itertools.product(range(len(objs)), repeat=4))

    def key(q: Tuple[int, int, int, int]) -> Tuple:
        c, a, b, m = (objs[i].size for i in q)
        return (m, max(a, b), a + b, c, a, b, q)

    quads.sort(key=key)
    for c, a, b, m in quads:
        for l in cat.hom_set(objs[a], objs[m], cls):
            for r in cat.hom_set(objs[b], objs[m], cls):
                for f in cat.hom_set(objs[c], objs[a], cls):
                    for g in cat.hom_set(objs[c], objs[b], cls):
                        if compose(l, f).table == compose(r, g).table:
                            yield CommutingSquare(Span(f, g), Cospan(l, r))


# universal axioms, lattice mode


def _invariance(sweep: Sweep, verdict: Verdict, semi: bool = False) -> None:
    for lat, (c, a, b, m) in sweep.lattice_squares():
        top = lat.top
        if top is None or m == top:
            continue
        verdict.obligations += 1
        inner = sweep.independent(lat, c, a, b, m)
        outer = sweep.independent(lat, c, a, b, top)
        if (outer and not inner) if semi else (inner != outer):
            _fail(
                verdict,
                inner=lat.square(c, a, b, m),
                outer=lat.square(c, a, b, top),
                extension=lat.factor(m, top),
            )
            return


def _monotonicity(sweep: Sweep, verdict: Verdict) -> None:
    for lat, (c, a, b, m) in sweep.lattice_squares():
        if not sweep.independent(lat, c, a, b, m):
            continue
        for smaller in lat.below(b):
            if smaller == b or not lat.leq[c, smaller]:
                continue
            verdict.obligations += 1
            if not sweep.independent(lat, c, a, smaller, m):
                _fail(
                    verdict,
                    square=lat.square(c, a, b, m),
                    smaller=lat.square(c, a, smaller, m),
                    inclusion=lat.factor(smaller, b),
                )
                return


def _transitivity(sweep: Sweep, verdict: Verdict) -> None:
    for lat, (c, a, b, m) in sweep.lattice_squares():
        if not sweep.independent(lat, c, a, b, m):
            continue
        for n in lat.above(m):
            for d in lat.below(n):
                if not lat.leq[b, d] or not sweep.independent(lat, b, m, d, n):
                    continue
                verdict.obligations += 1
                if not sweep.independent(lat, c, a, d, n):
                    _fail(
                        verdict,
                        first=lat.square(c, a, b, m),
                        second=lat.square(b, m, d, n),
                        composite=lat.square(c, a, d, n),
                    )
                    return


def _symmetry(sweep: Sweep, verdict: Verdict) -> None:
    for lat, (c, a, b, m) in sweep.lattice_squares():
        verdict.obligations += 1
        if sweep.independent(lat, c, a, b, m) and not sweep.independent(lat, c, b, a, m):
            _fail(verdict, square=lat.square(c, a, b, m))
            return


def _basic_existence(sweep: Sweep, verdict: Verdict) -> None:
    for lat, (c, a, b, m) in sweep.lattice_squares():
        if c != a and c != b:
            continue
        verdict.obligations += 1
        if not sweep.independent(lat, c, a, b, m):
            _fail(verdict, square=lat.square(c, a, b, m))
            return


def _extend_chains(
    sweep: Sweep, lat: SubobjectLattice, chain: List[Tuple[int, int]], length: int
) -> Iterator[List[Tuple[int, int]]]:
    if len(chain) > 1:
        yield chain
    if len(chain) > length:
        return
    c, a = chain[-1]
    for a2 in lat.above(a):
        for c2 in lat.below(a2):
            if (c2, a2) == (c, a) or not lat.leq[c, c2]:
                continue
            if sweep.independent(lat, c, a, c2, a2):
                yield from _extend_chains(sweep, lat, chain + [(c2, a2)], length)


def _union_chains(sweep: Sweep, verdict: Verdict) -> None:
    length = sweep.scope.chain_length
    for obj in sweep.ambients(UNION_AMBIENT_CAP):
        lat = sweep.lattice(obj)
        for a0 in range(len(lat)):
            for c0 in lat.below(a0):
                for chain in _extend_chains(sweep, lat, [(c0, a0)], length):
                    if len(chain) < 3:
                        continue
                    verdict.obligations += 1
                    (c, a), (ck, ak) = chain[0], chain[-1]
                    if not sweep.independent(lat, c, a, ck, ak):
                        links = [
                            lat.square(ci, ai, cj, aj)
                            for (ci, ai), (cj, aj) in zip(chain, chain[1:])
                        ]
                        _fail(verdict, chain=links, composite=lat.square(c, a, ck, ak))
                        return


# universal axioms, general mode


def _general_invariance(sweep: Sweep, verdict: Verdict, semi: bool = False) -> None:
    cat, cls, rel = sweep.cat, sweep.cls, sweep.rel
    objs = cat.objects(sweep.scope.max_object_size)
    for sq in general_squares(cat, cls, sweep.scope.max_object_size):
        inner = rel.classify(sq)
        for n in objs:
            for h in cat.hom_set(sq.m, n, cls):
                verdict.obligations += 1
                outer_sq = post_compose(sq, h)
                outer = rel.classify(outer_sq)
                if (outer and not inner) if semi else (inner != outer):
                    _fail(verdict, inner=sq, outer=outer_sq, extension=h)
                    return


def _general_symmetry(sweep: Sweep, verdict: Verdict) -> None:
    for sq in general_squares(sweep.cat, sweep.cls, sweep.scope.max_object_size):
        verdict.obligations += 1
        if sweep.rel.classify(sq) and not sweep.rel.classify(sq.transpose()):
            _fail(verdict, square=sq)
            return


def _general_basic_existence(sweep: Sweep, verdict: Verdict) -> None:
    cat = sweep.cat
    for sq in general_squares(cat, sweep.cls, sweep.scope.max_object_size):
        if not (cat.is_iso(sq.span.left) or cat.is_iso(sq.span.right)):
            continue
        verdict.obligations += 1
        if not sweep.rel.classify(sq):
            _fail(verdict, square=sq)
            return


def _general_monotonicity(sweep: Sweep, verdict: Verdict) -> None:
    cat, cls, rel = sweep.cat, sweep.cls, sweep.rel
    objs = cat.objects(sweep.scope.max_object_size)
    for sq in general_squares(cat, cls, sweep.scope.max_object_size):
        if not rel.classify(sq):
            continue
        f, g, l, r = sq.morphisms
        for b2 in objs:
            for u in cat.hom_set(b2, sq.b, cls):
                for g2 in cat.hom_set(sq.c, b2, cls):
                    if compose(u, g2).table != g.table:
                        continue
                    verdict.obligations += 1
                    smaller = CommutingSquare(Span(f, g2), Cospan(l, compose(r, u)))
                    if not rel.classify(smaller):
                        _fail(verdict, square=sq, smaller=smaller, inclusion=u)
                        return


# existential axioms


def _existence(sweep: Sweep, verdict: Verdict) -> None:
    undischarged = 0
    for span in sweep.spans():
        verdict.obligations += 1
        cocones = sweep.independent_cocones(span)
        if cocones:
            if verdict.certificate is None:
                verdict.certificate = {"sample": CommutingSquare(span, cocones[0]).to_dict()}
            continue
        undischarged += 1
        if verdict.status == HOLDS:
            verdict.status = INCONCLUSIVE
            verdict.witness = {"span": span.to_dict()}
    if undischarged:
        verdict.notes.append(
            f"{undischarged} spans without an independent completion up to size "
            f"{sweep.scope.max_completion_size}"
        )


def _base_monotonicity(sweep: Sweep, verdict: Verdict) -> None:
    undischarged = 0
    for lat, (c, a, d, m) in sweep.lattice_squares():
        if not sweep.independent(lat, c, a, d, m):
            continue
        for b in lat.below(d):
            if not lat.leq[c, b]:
                continue
            verdict.obligations += 1
            join = lat.join(a, b)
            uppers = [k for k in lat.below(m) if lat.leq[a, k] and lat.leq[b, k]]
            if join is not None and join in uppers:
                uppers.remove(join)
                uppers.insert(0, join)
            if any(sweep.independent(lat, b, k, d, m) for k in uppers):
                continue
            undischarged += 1
            if verdict.status == HOLDS:
                verdict.status = INCONCLUSIVE
                verdict.witness = {
                    "square": lat.square(c, a, d, m).to_dict(),
                    "base": lat.factor(c, b).to_dict(),
                }
    if undischarged:
        verdict.notes.append(
            f"{undischarged} base extensions not found; candidates were limited to "
            "subobjects of the apex"
        )


def _uniqueness(sweep: Sweep, verdict: Verdict) -> None:
    cat, cls, scope = sweep.cat, sweep.cls, sweep.scope
    for span in sweep.spans():
        cocones = sweep.independent_cocones(span)
        for i, j in itertools.combinations(range(len(cocones)), 2):
            verdict.obligations += 1
            sq1 = CommutingSquare(span, cocones[i])
            sq2 = CommutingSquare(span, cocones[j])
            amalgam = find_amalgam(cat, sq1, sq2, cls, scope)
            if amalgam.status == FAILS:
                _fail(verdict, squares=[sq1, sq2])
                verdict.certificate = amalgam.certificate
                return
            if amalgam.status == INCONCLUSIVE and verdict.status == HOLDS:
                verdict.status = INCONCLUSIVE
                verdict.witness = {"squares": [sq1.to_dict(), sq2.to_dict()]}


def _cube_independent(rel: IndependenceRelation, cube: Cube, strong: bool) -> bool:
    squares = [diagonal_square(cube)]
    if strong:
        squares.extend(cube.top_faces)
    return all(rel.classify(sq) for sq in squares)


def complete_horn(
    sweep: Sweep, horn: Horn, strong: bool = False
) -> Tuple[VerdictStatus, Optional[Cube], Optional[Dict[str, Any]]]:
    """Try to close a horn with its colimit, then with any cocone up to the completion size.

    The first dependent cube met is returned with an inconclusive status when no
    independent one turns up.
    """
    cat, cls, rel = sweep.cat, sweep.cls, sweep.rel
    glued = glue_horn(cat, horn)
    if isinstance(glued, Obstruction):
        return FAILS, None, glued.to_dict()
    dependent: Optional[Cube] = None
    if isinstance(glued, Gluing):
        tops = glued.legs[4:7]
        if all(leg in cls for leg in tops):
            cube = cube_from_legs(horn, glued.legs)
            if _cube_independent(rel, cube, strong):
                return HOLDS, cube, None
            dependent = cube
        elif cls.left_cancellable:
            return FAILS, None, colimit_defects(cat, tops, cls)
    for found in iter_cocones(
        cat, list(horn.objects), horn.arrows, cls, sweep.scope.max_completion_size, tops=[4, 5, 6]
    ):
        cube = cube_from_legs(horn, found.legs)
        if _cube_independent(rel, cube, strong):
            return HOLDS, cube, None
        if dependent is None:
            dependent = cube
    if dependent is None:
        return INCONCLUSIVE, None, {"reason": "search-exhausted"}
    return INCONCLUSIVE, dependent, {"reason": "completion-not-independent"}


def _three_amalgamation(sweep: Sweep, verdict: Verdict, strong: bool = False) -> None:
    undischarged = 0
    for horn in sweep.horns():
        verdict.obligations += 1
        status, cube, certificate = complete_horn(sweep, horn, strong)
        if status == FAILS:
            _fail(verdict, horn=horn)
            verdict.certificate = certificate
            return
        if status == INCONCLUSIVE:
            undischarged += 1
            if verdict.status == HOLDS:
                verdict.status = INCONCLUSIVE
                verdict.witness = {"horn": horn.to_dict()}
                verdict.certificate = certificate
        elif verdict.certificate is None and cube is not None:
            verdict.certificate = {"sample": cube.to_dict()}
    if undischarged:
        verdict.notes.append(f"{undischarged} horns not closed by an independent cube")


LATTICE_CHECKS: Dict[Axiom, Callable[[Sweep, Verdict], None]] = {
    Axiom.INVARIANCE: _invariance,
    Axiom.SEMI_INVARIANCE: lambda s, v: _invariance(s, v, semi=True),
    Axiom.MONOTONICITY: _monotonicity,
    Axiom.TRANSITIVITY: _transitivity,
    Axiom.SYMMETRY: _symmetry,
    Axiom.BASIC_EXISTENCE: _basic_existence,
    Axiom.EXISTENCE: _existence,
    Axiom.BASE_MONOTONICITY: _base_monotonicity,
    Axiom.UNIQUENESS: _uniqueness,
    Axiom.THREE_AMALGAMATION: _three_amalgamation,
    Axiom.STRONG_THREE_AMALGAMATION: lambda s, v: _three_amalgamation(s, v, strong=True),
    Axiom.UNION_FINITE_CHAIN: _union_chains,
}

GENERAL_CHECKS: Dict[Axiom, Callable[[Sweep, Verdict], None]] = {
    Axiom.INVARIANCE: _general_invariance,
    Axiom.SEMI_INVARIANCE: lambda s, v: _general_invariance(s, v, semi=True),
    Axiom.MONOTONICITY: _general_monotonicity,
    Axiom.SYMMETRY: _general_symmetry,
    Axiom.BASIC_EXISTENCE: _general_basic_existence,
}


def check_axiom(
    rel: IndependenceRelation,
    axiom: Axiom,
    scope: Scope,
    sweep: Optional[Sweep] = None,
) -> Verdict:
    """Check one axiom of a relation within scope."""
    axiom = Axiom(axiom)
    if sweep is None or sweep.rel is not rel or sweep.scope != scope:
        sweep = Sweep(rel, scope)
    checks = LATTICE_CHECKS if sweep.lattice_mode else GENERAL_CHECKS
    if axiom not in checks:
        raise CapabilityError(
            f"{axiom} needs subobject enumeration, which class {rel.cls.name} does not have",
            {"relation": rel.name, "axiom": axiom.value, "capability": "subobjects"},
        )
    verdict = Verdict(rel.name, axiom.value, HOLDS, scope)
    try:
        checks[axiom](sweep, verdict)
    except ScopeExceededError as exc:
        verdict.status = INCONCLUSIVE
        verdict.notes.append(f"scope exceeded: {exc}")
    if axiom == Axiom.UNION_FINITE_CHAIN:
        verdict.notes.append(f"proxy (finite chains <= {scope.chain_length})")
    if rel.category.kind == StructKind.PRODUCT:
        verdict.notes.append("object size is the largest component size")
    logger.info(
        "%s %s: %s after %d obligations", rel.name, axiom, verdict.status, verdict.obligations
    )
    return verdict


def check_axioms(
    rel: IndependenceRelation, axioms, scope: Scope
) -> Dict[Axiom, Verdict]:
    """Check several axioms sharing one sweep."""
    sweep = Sweep(rel, scope)
    return {Axiom(a): check_axiom(rel, Axiom(a), scope, sweep) for a in axioms}


def classify_verdicts(
    statuses: Mapping[Axiom, VerdictStatus], chain_length: int = 4
) -> Dict[str, Any]:
    """Place a relation in the stable / simple / NSOP1-like hierarchy."""

    def holds(axioms: Tuple[Axiom, ...]) -> bool:
        return all(statuses.get(a) == HOLDS for a in axioms)

    if holds(STABLE_AXIOMS):
        label = "stable-within-scope"
    elif holds(SIMPLE_AXIOMS):
        label = "simple-within-scope"
    elif holds(NSOP1_AXIOMS):
        label = "nsop1-like-within-scope"
    else:
        label = "unclassified"
    return {
        "classification": label,
        "accessibility": "not evaluated (infinitary)",
        "union": f"proxy (finite chains <= {chain_length})",
        "missing": [a.value for a in STABLE_AXIOMS if a not in statuses],
    }


# emergent and cross checks


def check_strong_from_three(rel: IndependenceRelation, scope: Scope) -> Verdict:
    """Horns closed by an independent diagonal must also close with independent top faces."""
    sweep = Sweep(rel, scope)
    verdict = Verdict(rel.name, "emergent-strong-3-amalgamation", HOLDS, scope)
    if not sweep.lattice_mode:
        raise CapabilityError("horn enumeration needs a class of monomorphisms")
    violations = 0
    try:
        for horn in sweep.horns():
            status, cube, _ = complete_horn(sweep, horn)
            if status != HOLDS or cube is None:
                continue
            verdict.obligations += 1
            if all(rel.classify(face) for face in cube.top_faces):
                continue
            violations += 1
            if verdict.status == HOLDS:
                verdict.status = INCONCLUSIVE
                verdict.witness = {"cube": cube.to_dict()}
    except ScopeExceededError as exc:
        verdict.status = INCONCLUSIVE
        verdict.notes.append(f"scope exceeded: {exc}")
    if violations:
        verdict.notes.append(f"{violations} cubes with a dependent top face")
    return verdict


def check_join_base_monotonicity(rel: IndependenceRelation, scope: Scope) -> Verdict:
    """For A independent from D over C and C <= B <= D, A v B is independent from D over B."""
    sweep = Sweep(rel, scope)
    verdict = Verdict(rel.name, "join-base-monotonicity", HOLDS, scope)
    if not sweep.lattice_mode:
        raise CapabilityError("joins need a class of monomorphisms")
    missing = 0
    for lat, (c, a, d, m) in sweep.lattice_squares():
        if not sweep.independent(lat, c, a, d, m):
            continue
        for b in lat.below(d):
            if not lat.leq[c, b]:
                continue
            join = lat.join(a, b)
            if join is None or not lat.leq[join, m]:
                missing += 1
                continue
            verdict.obligations += 1
            if not sweep.independent(lat, b, join, d, m):
                _fail(
                    verdict,
                    square=lat.square(c, a, d, m),
                    join_square=lat.square(b, join, d, m),
                )
                return verdict
    if missing:
        verdict.notes.append(f"{missing} pairs without a join")
    return verdict


def cross_check_basic_existence(
    rel: IndependenceRelation, scope: Scope, sweep: Optional[Sweep] = None
) -> Verdict:
    """Existence and invariance together force basic existence."""
    sweep = sweep or Sweep(rel, scope)
    verdict = Verdict(rel.name, "cross-check-basic-existence", HOLDS, scope)
    premises = [check_axiom(rel, a, scope, sweep) for a in (Axiom.EXISTENCE, Axiom.INVARIANCE)]
    if not all(p.holds for p in premises):
        verdict.status = SKIPPED
        verdict.notes.append("existence and invariance do not both hold")
        return verdict
    conclusion = check_axiom(rel, Axiom.BASIC_EXISTENCE, scope, sweep)
    verdict.obligations = conclusion.obligations
    verdict.status = conclusion.status
    verdict.witness = conclusion.witness
    return verdict


def check_extensional_identity(
    left: IndependenceRelation, right: IndependenceRelation, scope: Scope
) -> Verdict:
    """Two relations on the same category classify every enumerated square alike."""
    if left.category is not right.category or left.cls.name != right.cls.name:
        raise ContractError(
            "relations live on different categories or classes",
            {"left": left.to_dict(), "right": right.to_dict()},
        )
    verdict = Verdict(f"{left.name} = {right.name}", "extensional", HOLDS, scope)
    sweep = Sweep(left, scope)
    if sweep.lattice_mode:
        squares: Iterator[CommutingSquare] = (
            lat.square(*index) for lat, index in sweep.lattice_squares()
        )
    else:
        squares = general_squares(left.category, left.cls, scope.max_object_size)
    for sq in squares:
        verdict.obligations += 1
        if left.classify(sq) != right.classify(sq):
            return _fail(verdict, square=sq)
    return verdict


def check_join_oracle(
    cat: ConcreteCategory, scope: Scope, system: Optional[str] = None
) -> Verdict:
    """Joins computed from multipushouts agree with the lattice joins."""
    fs = cat.factorization_system(system)
    verdict = Verdict(f"{cat.name}/{fs.name}", "join-oracle", HOLDS, scope)
    for ambient in cat.objects(scope.max_object_size):
        subs = cat.subobjects_of(ambient, fs.m_class)
        for a, b in itertools.combinations_with_replacement(subs, 2):
            verdict.obligations += 1
            brute = join_bruteforce(cat, a, b, fs.m_class)
            built = join_via_multipushout(cat, a, b, fs.name, scope)
            if not same_subobject(cat, brute, built):
                return _fail(verdict, left=a, right=b, bruteforce=brute, multipushout=built)
    return verdict


def audit_class(cat: ConcreteCategory, cls: MorphismClass, scope: Scope) -> Verdict:
    """Identities and isomorphisms belong to cls, cls composes, and cancels when declared."""
    verdict = Verdict(f"{cat.name}/{cls.name}", "audit-class", HOLDS, scope)
    objs = cat.objects(scope.max_object_size)
    for x in objs:
        verdict.obligations += 1
        if identity(x) not in cls:
            return _fail(verdict, morphism=identity(x), reason="identity")
        for iso in cat.automorphisms(x):
            verdict.obligations += 1
            if iso not in cls:
                return _fail(verdict, morphism=iso, reason="isomorphism")
    for x, y, z in itertools.product(objs, repeat=3):
        for f in cat.hom_set(x, y, cls):
            for g in cat.hom_set(y, z, cls):
                verdict.obligations += 1
                if compose(g, f) not in cls:
                    return _fail(verdict, first=f, second=g, reason="composition")
        if cls.left_cancellable:
            for f in cat.hom_set(x, y):
                if f in cls:
                    continue
                for g in cat.hom_set(y, z):
                    verdict.obligations += 1
                    if compose(g, f) in cls:
                        return _fail(verdict, first=f, second=g, reason="left-cancellation")
    return verdict


# replay


def _tables_equal(f: StructMorphism, g: StructMorphism) -> bool:
    return f.dom == g.dom and f.cod == g.cod and f.table == g.table


def _square(payload: Dict[str, Any]) -> CommutingSquare:
    return CommutingSquare.from_dict(payload)


def _replay_invariance(rel, witness, semi: bool) -> bool:
    inner, outer = _square(witness["inner"]), _square(witness["outer"])
    h = StructMorphism.from_dict(witness["extension"])
    expected = post_compose(inner, h)
    if outer.span != inner.span or not (
        _tables_equal(outer.cocone.left, expected.cocone.left)
        and _tables_equal(outer.cocone.right, expected.cocone.right)
    ):
        return False
    a, b = rel.classify(inner), rel.classify(outer)
    return (b and not a) if semi else a != b


def _replay_monotonicity(rel, witness) -> bool:
    sq, smaller = _square(witness["square"]), _square(witness["smaller"])
    u = StructMorphism.from_dict(witness["inclusion"])
    shaped = (
        _tables_equal(smaller.span.left, sq.span.left)
        and _tables_equal(compose(u, smaller.span.right), sq.span.right)
        and _tables_equal(smaller.cocone.left, sq.cocone.left)
        and _tables_equal(smaller.cocone.right, compose(sq.cocone.right, u))
    )
    return shaped and rel.classify(sq) and not rel.classify(smaller)


def _replay_transitivity(rel, witness) -> bool:
    first, second = _square(witness["first"]), _square(witness["second"])
    composite = _square(witness["composite"])
    shaped = (
        _tables_equal(second.span.left, first.cocone.right)
        and _tables_equal(composite.span.left, first.span.left)
        and _tables_equal(composite.span.right, compose(second.span.right, first.span.right))
        and _tables_equal(composite.cocone.left, compose(second.cocone.left, first.cocone.left))
        and _tables_equal(composite.cocone.right, second.cocone.right)
    )
    return (
        shaped
        and rel.classify(first)
        and rel.classify(second)
        and not rel.classify(composite)
    )


def _replay_union(rel, witness) -> bool:
    links = [_square(p) for p in witness["chain"]]
    composite = _square(witness["composite"])
    return all(rel.classify(sq) for sq in links) and not rel.classify(composite)


def replay_witness(rel: IndependenceRelation, verdict: Verdict) -> Verdict:
    """Re-check a stored failure; the result fails again only if the violation reproduces."""
    replayed = Verdict(rel.name, verdict.check, HOLDS, verdict.scope, witness=verdict.witness)
    if verdict.status != FAILS or verdict.witness is None:
        raise ContractError("only failing verdicts with a witness can be replayed")
    witness = verdict.witness
    check = verdict.check
    cat = rel.category
    if check in (Axiom.INVARIANCE.value, Axiom.SEMI_INVARIANCE.value):
        reproduced = _replay_invariance(rel, witness, check == Axiom.SEMI_INVARIANCE.value)
    elif check == Axiom.MONOTONICITY.value:
        reproduced = _replay_monotonicity(rel, witness)
    elif check == Axiom.TRANSITIVITY.value:
        reproduced = _replay_transitivity(rel, witness)
    elif check == Axiom.SYMMETRY.value:
        sq = _square(witness["square"])
        reproduced = rel.classify(sq) and not rel.classify(sq.transpose())
    elif check == Axiom.BASIC_EXISTENCE.value:
        sq = _square(witness["square"])
        iso_side = cat.is_iso(sq.span.left) or cat.is_iso(sq.span.right)
        reproduced = iso_side and not rel.classify(sq)
    elif check == Axiom.UNION_FINITE_CHAIN.value:
        reproduced = _replay_union(rel, witness)
    elif check == Axiom.UNIQUENESS.value:
        sq1, sq2 = (_square(p) for p in witness["squares"])
        both = rel.classify(sq1) and rel.classify(sq2)
        reproduced = both and find_amalgam(cat, sq1, sq2, rel.cls, verdict.scope).status == FAILS
    elif check in (Axiom.THREE_AMALGAMATION.value, Axiom.STRONG_THREE_AMALGAMATION.value):
        horn = Horn.from_dict(witness["horn"])
        strong = check == Axiom.STRONG_THREE_AMALGAMATION.value
        status, _, _ = complete_horn(Sweep(rel, verdict.scope), horn, strong)
        reproduced = all(rel.classify(face) for face in horn.faces) and status == FAILS
    elif check == "join-base-monotonicity":
        reproduced = rel.classify(_square(witness["square"])) and not rel.classify(
            _square(witness["join_square"])
        )
    else:
        raise ContractError(f"no witness replay for {check}")
    if reproduced:
        replayed.status = FAILS
    logger.info("replayed %s %s: %s", rel.name, check, replayed.status)
    return replayed
