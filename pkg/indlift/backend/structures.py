"""Set-like kinds: finite sets, graphs, connected graphs, sigma-structures, binary functions."""
import itertools
import logging
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

from indlift.backend.categories import (
    AMALGAMATION_DECIDER,
    CANONICAL_AMALGAM,
    FACTORIZATION,
    JOINS,
    MULTIPUSHOUT,
    PULLBACK,
    ConcreteCategory,
    GlueResult,
    Gluing,
    _UnionFind,
    canonical_forms,
)
from indlift.backend.models import (
    Element,
    MorphismClass,
    Obstruction,
    StructData,
    StructKind,
    StructMorphism,
    StructObject,
    Subobject,
)

logger = logging.getLogger(__name__)

EXACT = frozenset(
    {PULLBACK, MULTIPUSHOUT, FACTORIZATION, CANONICAL_AMALGAM, AMALGAMATION_DECIDER, JOINS}
)


def is_injective(f: StructMorphism) -> bool:
    """Class predicate: injective on carriers."""
    return f.is_injective()


def reflects_edges(f: StructMorphism) -> bool:
    """Class predicate: injective and non-edges map to non-edges."""
    if not f.is_injective():
        return False
    carrier = f.dom.carrier
    for i, u in enumerate(carrier):
        for v in carrier[i + 1 :]:
            if f.cod.has_edge(f(u), f(v)) and not f.dom.has_edge(u, v):
                return False
    return True


def injective_class(name: str = "inj") -> MorphismClass:
    """Injective maps, left-cancellable."""
    return MorphismClass(name, is_injective, injective=True, left_cancellable=True)


def embedding_class(name: str = "emb") -> MorphismClass:
    """Injective maps reflecting the edge relation."""
    return MorphismClass(
        name, reflects_edges, injective=True, reflecting=True, left_cancellable=True
    )


class FiniteStructureCategory(ConcreteCategory):
    """Finite sets optionally carrying a loopless graph and a unary endomorphism."""

    has_edges = False
    has_endo = False
    capabilities = EXACT

    def __init__(self, name: str, max_homs: int = 200_000) -> None:
        """Initialize the category."""
        super().__init__(name, max_homs)

    # well-formedness and morphisms

    def _well_formed(self, obj: StructObject) -> bool:
        if not super()._well_formed(obj):
            return False
        members = obj.positions
        if self.has_edges:
            for edge in obj.data.edges:
                if len(edge) != 2 or any(x not in members for x in edge):
                    return False
        elif obj.data.edges:
            return False
        if self.has_endo:
            endo = obj.data.endo
            if endo is None or len(endo) != len(obj.carrier):
                return False
            if any(y not in members for y in endo):
                return False
            if self.has_edges:
                for u, v in (tuple(e) for e in obj.data.edges):
                    if not obj.has_edge(obj.sigma(u), obj.sigma(v)):
                        return False
        return True

    def is_structure_map(
        self, dom: StructObject, cod: StructObject, table: Tuple[Element, ...]
    ) -> bool:
        t = dict(zip(dom.carrier, table))
        if self.has_edges:
            for u, v in (tuple(e) for e in dom.data.edges):
                if not cod.has_edge(t[u], t[v]):
                    return False
        if self.has_endo:
            for x in dom.carrier:
                if t[dom.sigma(x)] != cod.sigma(t[x]):
                    return False
        return True

    def _consistent(
        self, dom: StructObject, cod: StructObject, table: List[Element], i: int
    ) -> bool:
        x = dom.carrier[i]
        if self.has_edges:
            for j in range(i):
                if dom.has_edge(x, dom.carrier[j]) and not cod.has_edge(
                    table[i], table[j]
                ):
                    return False
        if self.has_endo:
            for j in range(i + 1):
                k = dom.index(dom.sigma(dom.carrier[j]))
                if k <= i and table[k] != cod.sigma(table[j]):
                    return False
        return True

    def invariant(self, obj: StructObject) -> Tuple:
        degrees: Tuple[int, ...] = ()
        if self.has_edges:
            degrees = tuple(
                sorted(sum(1 for e in obj.data.edges if x in e) for x in obj.carrier)
            )
        fibres: Tuple[int, ...] = ()
        if self.has_endo:
            assert obj.data.endo is not None
            fibres = tuple(sorted(obj.data.endo.count(x) for x in obj.carrier))
            fixed = sum(1 for x in obj.carrier if obj.sigma(x) == x)
            fibres = fibres + (fixed,)
        return (len(obj.carrier), degrees, fibres)

    # enumeration

    def _encodings(self, n: int) -> Iterator[Tuple[int, ...]]:
        pairs = list(itertools.combinations(range(n), 2))
        endos: Iterator[Tuple[int, ...]] = (
            itertools.product(range(n), repeat=n) if self.has_endo else iter([()])
        )
        for endo in endos:
            masks = (
                itertools.product((0, 1), repeat=len(pairs)) if self.has_edges else [()]
            )
            for mask in masks:
                if self.has_edges and self.has_endo:
                    if any(
                        bit
                        and (endo[i] == endo[j] or not mask[pairs.index(_ordered(endo[i], endo[j]))])
                        for bit, (i, j) in zip(mask, pairs)
                    ):
                        continue
                yield tuple(endo) + tuple(mask)

    def _act(self, n: int):
        pairs = list(itertools.combinations(range(n), 2))
        pair_index = {p: k for k, p in enumerate(pairs)}
        endo_len = n if self.has_endo else 0

        def act(key: Tuple[int, ...], p: Tuple[int, ...]) -> Tuple[int, ...]:
            endo = [0] * endo_len
            for i in range(endo_len):
                endo[p[i]] = p[key[i]]
            mask = [0] * len(pairs)
            if self.has_edges:
                for k, (i, j) in enumerate(pairs):
                    if key[endo_len + k]:
                        mask[pair_index[_ordered(p[i], p[j])]] = 1
            return tuple(endo) + tuple(mask)

        return act

    def _decode(self, n: int, key: Tuple[int, ...]) -> StructObject:
        pairs = list(itertools.combinations(range(n), 2))
        endo_len = n if self.has_endo else 0
        edges: FrozenSet = frozenset()
        if self.has_edges:
            edges = frozenset(
                frozenset(pair) for bit, pair in zip(key[endo_len:], pairs) if bit
            )
        endo = tuple(key[:endo_len]) if self.has_endo else None
        return StructObject(self.kind, tuple(range(n)), StructData(edges=edges, endo=endo))

    def _accept(self, obj: StructObject) -> bool:
        return True

    @lru_cache(maxsize=None)
    def enumerate_objects(self, n: int) -> Tuple[StructObject, ...]:
        if n < self.min_size:
            return ()
        if not (self.has_edges or self.has_endo):
            return (StructObject(self.kind, tuple(range(n))),)
        reps = canonical_forms(list(self._encodings(n)), n, self._act(n))
        found = tuple(
            obj for obj in (self._decode(n, key) for key in reps) if self._accept(obj)
        )
        logger.debug("%s: %d objects of size %d", self.name, len(found), n)
        return found

    # substructures

    def closure(self, obj: StructObject, elements) -> FrozenSet[Element]:
        closed = set(elements)
        if self.has_endo:
            frontier = list(closed)
            while frontier:
                y = obj.sigma(frontier.pop())
                if y not in closed:
                    closed.add(y)
                    frontier.append(y)
        return frozenset(closed)

    def _induced_data(self, obj: StructObject, carrier: Tuple[Element, ...]) -> StructData:
        chosen = set(carrier)
        edges: FrozenSet = frozenset()
        if self.has_edges:
            edges = frozenset(e for e in obj.data.edges if e <= chosen)
        endo = tuple(obj.sigma(x) for x in carrier) if self.has_endo else None
        return StructData(edges=edges, endo=endo)

    def _edge_image(self, f: StructMorphism, m: StructMorphism) -> StructMorphism:
        if not self.has_edges:
            return m
        edges = frozenset(
            frozenset((f(u), f(v))) for u, v in (tuple(e) for e in f.dom.data.edges)
        )
        sub = StructObject(self.kind, m.dom.carrier, StructData(edges=edges, endo=m.dom.data.endo))
        return StructMorphism(sub, f.cod, m.table)

    def _tight_decorations(
        self,
        apex: StructObject,
        left: StructMorphism,
        right: StructMorphism,
        cls: MorphismClass,
    ) -> Iterator[StructObject]:
        if not self.has_edges:
            yield apex
            return
        in_a, in_b = left.image, right.image
        free = []
        for i, u in enumerate(apex.carrier):
            for v in apex.carrier[i + 1 :]:
                if apex.has_edge(u, v):
                    continue
                pair = frozenset((u, v))
                if cls.reflecting and (pair <= in_a or pair <= in_b):
                    continue
                free.append(pair)
        for k in range(len(free) + 1):
            for extra in itertools.combinations(free, k):
                yield StructObject(
                    self.kind,
                    apex.carrier,
                    StructData(edges=apex.data.edges | frozenset(extra), endo=apex.data.endo),
                )

    @lru_cache(maxsize=1024)
    def subobjects_of(
        self, obj: StructObject, cls: Optional[MorphismClass] = None
    ) -> Tuple[Subobject, ...]:
        cls = cls or self.default_class
        if not self.has_edges or cls.reflecting:
            return super().subobjects_of(obj, cls)
        # non-induced subgraphs: every edge subset on every closed vertex set
        subs = []
        for closed in self.closed_subsets(obj):
            inclusion = self.substructure(obj, closed)
            induced = sorted(inclusion.dom.data.edges, key=lambda e: sorted(obj.index(x) for x in e))
            for k in range(len(induced) + 1):
                for chosen in itertools.combinations(induced, k):
                    sub = StructObject(
                        self.kind,
                        inclusion.dom.carrier,
                        StructData(edges=frozenset(chosen), endo=inclusion.dom.data.endo),
                    )
                    if not self.contains(sub):
                        continue
                    rep = StructMorphism(sub, obj, inclusion.table)
                    if rep in cls:
                        subs.append(Subobject(obj, rep))
        return tuple(subs)

    # limits and colimits

    def _pullback_data(
        self, a: StructObject, b: StructObject, pairs: Tuple[Tuple[Element, Element], ...]
    ) -> StructData:
        edges: FrozenSet = frozenset()
        if self.has_edges:
            edges = frozenset(
                frozenset((p, r))
                for i, p in enumerate(pairs)
                for r in pairs[i + 1 :]
                if a.has_edge(p[0], r[0]) and b.has_edge(p[1], r[1])
            )
        endo = tuple((a.sigma(x), b.sigma(y)) for x, y in pairs) if self.has_endo else None
        return StructData(edges=edges, endo=endo)

    def _congruence(self, objects: Sequence[StructObject], uf: _UnionFind) -> None:
        if not self.has_endo:
            return
        changed = True
        while changed:
            changed = False
            image_of: Dict[Element, Element] = {}
            for i, obj in enumerate(objects):
                for x in obj.carrier:
                    root = uf.find((i, x))
                    target = uf.find((i, obj.sigma(x)))
                    if root in image_of and uf.find(image_of[root]) != target:
                        uf.union(image_of[root], target)
                        changed = True
                    else:
                        image_of[root] = target

    def _glue_data(
        self,
        objects: Sequence[StructObject],
        tables: Sequence[Tuple[int, ...]],
        size: int,
    ) -> Union[StructData, Obstruction]:
        edges = set()
        if self.has_edges:
            for i, obj in enumerate(objects):
                for u, v in obj.sorted_edges():
                    lu, lv = tables[i][obj.index(u)], tables[i][obj.index(v)]
                    if lu == lv:
                        return Obstruction(
                            "loop", (("object", i), ("edge", [u, v]))
                        )
                    edges.add(frozenset((lu, lv)))
        endo = None
        if self.has_endo:
            values: List[Optional[int]] = [None] * size
            for i, obj in enumerate(objects):
                for x in obj.carrier:
                    values[tables[i][obj.index(x)]] = tables[i][obj.index(obj.sigma(x))]
            endo = tuple(values)
        return StructData(edges=frozenset(edges), endo=endo)


def _ordered(i: int, j: int) -> Tuple[int, int]:
    return (i, j) if i < j else (j, i)


class FinSetCategory(FiniteStructureCategory):
    """Finite sets and functions."""

    kind = StructKind.SET

    def __init__(self, name: str = "fin-set", max_homs: int = 200_000) -> None:
        """Initialize the category with the all and inj classes."""
        super().__init__(name, max_homs)
        inj = self.add_class(injective_class())
        self.default_class_name = "inj"
        self.add_factorization_system("surj-inj", inj)


class FinGraphCategory(FiniteStructureCategory):
    """Finite loopless simple graphs and homomorphisms."""

    kind = StructKind.GRAPH
    has_edges = True

    def __init__(self, name: str = "fin-graph", max_homs: int = 200_000) -> None:
        """Initialize the category with the all, mono and emb classes."""
        super().__init__(name, max_homs)
        mono = self.add_class(injective_class("mono"))
        emb = self.add_class(embedding_class())
        self.default_class_name = "emb"
        self.add_factorization_system("surj-emb", emb)
        edge_surjective = self.add_class(
            MorphismClass("edge-surj", _edge_surjective)
        )
        self.add_factorization_system(
            "edge-surj-mono", mono, induced=False, e_class=edge_surjective
        )


def _edge_surjective(f: StructMorphism) -> bool:
    if not f.is_surjective():
        return False
    images = {frozenset((f(u), f(v))) for u, v in (tuple(e) for e in f.dom.data.edges)}
    return images == set(f.cod.data.edges)


def is_connected(obj: StructObject) -> bool:
    """Whether a graph is nonempty and connected."""
    if not obj.carrier:
        return False
    seen = {obj.carrier[0]}
    frontier = [obj.carrier[0]]
    while frontier:
        u = frontier.pop()
        for edge in obj.data.edges:
            if u in edge:
                for v in edge:
                    if v not in seen:
                        seen.add(v)
                        frontier.append(v)
    return len(seen) == len(obj.carrier)


def components(obj: StructObject) -> List[Tuple[Element, ...]]:
    """Connected components in carrier order."""
    remaining = list(obj.carrier)
    found = []
    while remaining:
        start = remaining[0]
        seen = {start}
        frontier = [start]
        while frontier:
            u = frontier.pop()
            for edge in obj.data.edges:
                if u in edge:
                    for v in edge:
                        if v not in seen:
                            seen.add(v)
                            frontier.append(v)
        block = tuple(x for x in obj.carrier if x in seen)
        found.append(block)
        remaining = [x for x in remaining if x not in seen]
    return found


class ConnGraphCategory(FinGraphCategory):
    """Nonempty connected graphs; pullbacks are computed among all graphs."""

    min_size = 1
    capabilities = frozenset({PULLBACK, MULTIPUSHOUT, FACTORIZATION, AMALGAMATION_DECIDER})

    def __init__(self, name: str = "conn-graph", max_homs: int = 200_000) -> None:
        """Initialize the category."""
        super().__init__(name, max_homs)

    def _well_formed(self, obj: StructObject) -> bool:
        return super()._well_formed(obj) and is_connected(obj)

    def _accept(self, obj: StructObject) -> bool:
        return is_connected(obj)

    def closed_subsets(self, obj: StructObject) -> Iterator[FrozenSet[Element]]:
        for closed in super().closed_subsets(obj):
            if closed and is_connected(self.substructure(obj, closed).dom):
                yield closed

    def glue(self, objects, arrows, identify=()) -> GlueResult:
        """Glue as graphs; None when the result is not connected."""
        result = super().glue(objects, arrows, identify)
        if isinstance(result, Gluing) and not is_connected(result.apex):
            return None
        return result

    def _glue_for_cocones(self, objects, arrows, identify) -> GlueResult:
        # decorations may still connect a disconnected gluing
        return FinGraphCategory.glue(self, objects, arrows, identify)


class SigmaSetCategory(FiniteStructureCategory):
    """Finite sets with an endomorphism and equivariant maps."""

    kind = StructKind.SIGMA_SET
    has_endo = True

    def __init__(self, name: str = "sigma-set", max_homs: int = 200_000) -> None:
        """Initialize the category with the all and inj classes."""
        super().__init__(name, max_homs)
        inj = self.add_class(injective_class())
        self.default_class_name = "inj"
        self.add_factorization_system("surj-inj", inj)


class SigmaGraphCategory(FiniteStructureCategory):
    """Graphs with an edge-preserving endomorphism and equivariant homomorphisms."""

    kind = StructKind.SIGMA_GRAPH
    has_edges = True
    has_endo = True

    def __init__(self, name: str = "sigma-graph", max_homs: int = 200_000) -> None:
        """Initialize the category with the all, mono and emb classes."""
        super().__init__(name, max_homs)
        self.add_class(injective_class("mono"))
        emb = self.add_class(embedding_class())
        self.default_class_name = "emb"
        self.add_factorization_system("surj-emb", emb)


def binfunc_value(obj: StructObject, x: Element, y: Element) -> int:
    """The value of a binary function object at (x, y)."""
    assert obj.data.table is not None
    return obj.data.table[obj.index(x)][obj.index(y)]


class FinBinFuncCategory(ConcreteCategory):
    """Finite sets with a binary function into GF(q), and value-preserving maps."""

    kind = StructKind.BINFUNC
    capabilities = EXACT

    def __init__(self, q: int = 2, name: Optional[str] = None, max_homs: int = 200_000) -> None:
        """Initialize the category with the all and mono classes."""
        super().__init__(name or f"fin-binfunc-{q}", max_homs)
        self.q = q
        mono = self.add_class(injective_class("mono"))
        self.default_class_name = "mono"
        self.add_factorization_system("surj-mono", mono)

    def _well_formed(self, obj: StructObject) -> bool:
        table = obj.data.table
        n = len(obj.carrier)
        return (
            super()._well_formed(obj)
            and obj.data.q == self.q
            and table is not None
            and len(table) == n
            and all(len(row) == n and all(0 <= v < self.q for v in row) for row in table)
        )

    def is_structure_map(
        self, dom: StructObject, cod: StructObject, table: Tuple[Element, ...]
    ) -> bool:
        for i, x in enumerate(dom.carrier):
            for j, y in enumerate(dom.carrier):
                if binfunc_value(cod, table[i], table[j]) != dom.data.table[i][j]:
                    return False
        return True

    def _consistent(
        self, dom: StructObject, cod: StructObject, table: List[Element], i: int
    ) -> bool:
        for j in range(i + 1):
            if binfunc_value(cod, table[i], table[j]) != dom.data.table[i][j]:
                return False
            if binfunc_value(cod, table[j], table[i]) != dom.data.table[j][i]:
                return False
        return True

    def invariant(self, obj: StructObject) -> Tuple:
        table = obj.data.table or ()
        diagonal = tuple(sorted(table[i][i] for i in range(len(table))))
        counts = tuple(sum(row.count(v) for row in table) for v in range(self.q))
        return (len(obj.carrier), diagonal, counts)

    def make(self, rows: Sequence[Sequence[int]], carrier: Optional[Sequence[Element]] = None) -> StructObject:
        """Build an object from its value table."""
        carrier = tuple(carrier) if carrier is not None else tuple(range(len(rows)))
        return StructObject(
            self.kind,
            carrier,
            StructData(q=self.q, table=tuple(tuple(int(v) for v in r) for r in rows)),
        )

    @lru_cache(maxsize=None)
    def enumerate_objects(self, n: int) -> Tuple[StructObject, ...]:
        def act(key: Tuple[int, ...], p: Tuple[int, ...]) -> Tuple[int, ...]:
            out = [0] * (n * n)
            for i in range(n):
                for j in range(n):
                    out[p[i] * n + p[j]] = key[i * n + j]
            return tuple(out)

        keys = list(itertools.product(range(self.q), repeat=n * n))
        reps = canonical_forms(keys, n, act)
        found = tuple(
            self.make([key[i * n : (i + 1) * n] for i in range(n)]) for key in reps
        )
        logger.debug("%s: %d objects of size %d", self.name, len(found), n)
        return found

    def _induced_data(self, obj: StructObject, carrier: Tuple[Element, ...]) -> StructData:
        return StructData(
            q=self.q,
            table=tuple(tuple(binfunc_value(obj, x, y) for y in carrier) for x in carrier),
        )

    def _pullback_data(
        self, a: StructObject, b: StructObject, pairs: Tuple[Tuple[Element, Element], ...]
    ) -> StructData:
        return StructData(
            q=self.q,
            table=tuple(tuple(binfunc_value(a, x[0], y[0]) for y in pairs) for x in pairs),
        )

    def _glue_data(
        self,
        objects: Sequence[StructObject],
        tables: Sequence[Tuple[int, ...]],
        size: int,
    ) -> Union[StructData, Obstruction]:
        values: Dict[Tuple[int, int], Tuple[int, int, Element, Element]] = {}
        for i, obj in enumerate(objects):
            for x in obj.carrier:
                for y in obj.carrier:
                    key = (tables[i][obj.index(x)], tables[i][obj.index(y)])
                    value = binfunc_value(obj, x, y)
                    if key in values and values[key][0] != value:
                        _, j, x0, y0 = values[key]
                        return Obstruction(
                            "binfunc-conflict",
                            (
                                ("left", {"object": j, "pair": [x0, y0]}),
                                ("right", {"object": i, "pair": [x, y]}),
                            ),
                        )
                    values.setdefault(key, (value, i, x, y))
        rows = tuple(
            tuple(values[(s, t)][0] if (s, t) in values else 0 for t in range(size))
            for s in range(size)
        )
        return StructData(q=self.q, table=rows)

    def _tight_decorations(
        self,
        apex: StructObject,
        left: StructMorphism,
        right: StructMorphism,
        cls: MorphismClass,
    ) -> Iterator[StructObject]:
        in_a, in_b = left.image, right.image
        free = [
            (i, j)
            for i, u in enumerate(apex.carrier)
            for j, v in enumerate(apex.carrier)
            if not ({u, v} <= in_a or {u, v} <= in_b)
        ]
        assert apex.data.table is not None
        for values in itertools.product(range(self.q), repeat=len(free)):
            rows = [list(r) for r in apex.data.table]
            for (i, j), v in zip(free, values):
                rows[i][j] = v
            yield self.make(rows, apex.carrier)
