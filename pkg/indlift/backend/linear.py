"""Finite vector spaces and spaces with a bilinear form over GF(q)."""
import itertools
import logging
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from indlift.backend.categories import (
    AMALGAMATION_DECIDER,
    CANONICAL_AMALGAM,
    FACTORIZATION,
    JOINS,
    MULTIPUSHOUT,
    PULLBACK,
    Arrow,
    ConcreteCategory,
    GlueResult,
    Gluing,
)
from indlift.backend.errors import MalformedDiagramError
from indlift.backend.fields import Vector, galois_field
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
)
from indlift.backend.structures import injective_class

logger = logging.getLogger(__name__)


class FinVecCategory(ConcreteCategory):
    """Finite-dimensional vector spaces F_q^n and linear maps."""

    kind = StructKind.VECSPACE
    capabilities = frozenset(
        {PULLBACK, MULTIPUSHOUT, FACTORIZATION, CANONICAL_AMALGAM, AMALGAMATION_DECIDER, JOINS}
    )
    injective_name = "inj"

    def __init__(self, q: int = 2, name: Optional[str] = None, max_homs: int = 200_000) -> None:
        """Initialize the category over GF(q)."""
        super().__init__(name or f"fin-vec-{q}", max_homs)
        self.q = q
        self.field = galois_field(q)
        inj = self.add_class(injective_class(self.injective_name))
        self.default_class_name = self.injective_name
        self.add_factorization_system(f"surj-{self.injective_name}", inj)

    # objects

    @lru_cache(maxsize=None)
    def space(self, dim: int) -> Tuple[Vector, ...]:
        """The vectors of F_q^dim in lexicographic order."""
        return self.field.vectors(dim)

    def make(self, dim: int, gram: Optional[np.ndarray] = None) -> StructObject:
        """Build F_q^dim, with a Gram matrix for form-carrying kinds."""
        return StructObject(self.kind, self.space(dim), StructData(q=self.q, dim=dim))

    def _well_formed(self, obj: StructObject) -> bool:
        dim = obj.data.dim
        return dim is not None and obj.data.q == self.q and obj.carrier == self.space(dim)

    def enumerate_objects(self, n: int) -> Tuple[StructObject, ...]:
        return (self.make(n),)

    def invariant(self, obj: StructObject) -> Tuple:
        return (obj.data.dim,)

    # matrices

    def rows(self, vectors: Sequence[Vector], width: int) -> np.ndarray:
        """Stack vectors as matrix rows; empty input gives shape (0, width)."""
        if not vectors:
            return np.zeros((0, width), dtype=np.int64)
        return np.array(vectors, dtype=np.int64).reshape(len(vectors), width)

    def basis(self, obj: StructObject) -> List[Vector]:
        dim = int(obj.data.dim or 0)
        return [self.field.basis_vector(dim, i) for i in range(dim)]

    def matrix_of(self, f: StructMorphism) -> np.ndarray:
        """Rows are the images of the standard basis vectors."""
        return self.rows([f(e) for e in self.basis(f.dom)], int(f.cod.data.dim or 0))

    def table_from_matrix(
        self, dom: StructObject, cod: StructObject, matrix: np.ndarray
    ) -> Tuple[Vector, ...]:
        """Table of the linear map whose basis images are the matrix rows."""
        d = int(dom.data.dim or 0)
        m = int(cod.data.dim or 0)
        if d == 0:
            return (tuple(0 for _ in range(m)),)
        points = self.rows(list(dom.carrier), d)
        image = self.field.mat_mul(points, matrix)
        return tuple(tuple(int(v) for v in row) for row in image)

    def _preserves_form(self, dom: StructObject, cod: StructObject, matrix: np.ndarray) -> bool:
        return True

    def is_structure_map(
        self, dom: StructObject, cod: StructObject, table: Tuple[Element, ...]
    ) -> bool:
        matrix = self.rows(
            [table[dom.index(e)] for e in self.basis(dom)], int(cod.data.dim or 0)
        )
        if self.table_from_matrix(dom, cod, matrix) != tuple(table):
            return False
        return self._preserves_form(dom, cod, matrix)

    def _candidate_tables(
        self, dom: StructObject, cod: StructObject, injective: bool
    ) -> Iterator[Tuple[Element, ...]]:
        d = int(dom.data.dim or 0)
        m = int(cod.data.dim or 0)
        if injective and d > m:
            return
        for images in itertools.product(cod.carrier, repeat=d):
            matrix = self.rows(list(images), m)
            if injective and self.field.rank(matrix) < d:
                continue
            if not self._preserves_form(dom, cod, matrix):
                continue
            yield self.table_from_matrix(dom, cod, matrix)

    # subspaces

    def span(self, obj: StructObject, elements) -> Tuple[np.ndarray, Tuple[int, ...]]:
        """Echelon basis and pivots of the span of some vectors."""
        dim = int(obj.data.dim or 0)
        return self.field.rref(self.rows(list(elements), dim))

    def closure(self, obj: StructObject, elements) -> FrozenSet[Element]:
        basis, _ = self.span(obj, elements)
        k = basis.shape[0]
        return frozenset(self.field.combine(c, basis) for c in self.space(k)) | {
            tuple(0 for _ in range(int(obj.data.dim or 0)))
        }

    def closed_subsets(self, obj: StructObject) -> Iterator[FrozenSet[Element]]:
        dim = int(obj.data.dim or 0)
        for _, basis in self.field.echelon_bases(dim):
            yield self.closure(obj, basis)

    def _sub_gram(self, obj: StructObject, basis: np.ndarray) -> Optional[np.ndarray]:
        return None

    def substructure(self, obj: StructObject, elements) -> StructMorphism:
        """Inclusion F_q^k -> obj of the subspace spanned by the elements."""
        basis, _ = self.span(obj, elements)
        k = basis.shape[0]
        sub = self.make(k, self._sub_gram(obj, basis))
        table = tuple(self.field.combine(c, basis) for c in sub.carrier)
        return StructMorphism(sub, obj, table)

    def mediating(
        self,
        apex: StructObject,
        legs: Sequence[StructMorphism],
        targets: Sequence[StructMorphism],
        cls: Optional[MorphismClass] = None,
    ) -> List[StructMorphism]:
        """Solve for the linear map on the span of the leg images."""
        if not targets:
            return []
        cod = targets[0].cod
        k, m = int(apex.data.dim or 0), int(cod.data.dim or 0)
        sources, values = [], []
        for leg, target in zip(legs, targets):
            for e in self.basis(leg.dom):
                sources.append(leg(e))
                values.append(target(e))
        x = self.rows(sources, k)
        if self.field.rank(x) < k:
            return super().mediating(apex, legs, targets, cls)
        y = self.rows(values, m)
        columns = []
        for col in range(m):
            solution = self.field.solve(x, y[:, col])
            if solution is None:
                return []
            columns.append(solution)
        matrix = np.stack(columns, axis=1) if columns else np.zeros((k, 0), dtype=np.int64)
        if not self._preserves_form(apex, cod, matrix):
            return []
        u = StructMorphism(apex, cod, self.table_from_matrix(apex, cod, matrix))
        return [u] if cls is None or u in cls else []

    def image_factorization(
        self, f: StructMorphism, induced: bool = True
    ) -> Tuple[StructMorphism, StructMorphism]:
        m = self.substructure(f.cod, f.image)
        back = {v: c for c, v in zip(m.dom.carrier, m.table)}
        return StructMorphism(f.dom, m.dom, tuple(back[y] for y in f.table)), m

    # limits and colimits

    def pullback(self, cospan: Cospan) -> CommutingSquare:
        """Kernel of [f | -g] as the pullback apex."""
        f, g = cospan.left, cospan.right
        if f.cod != g.cod:
            raise MalformedDiagramError("cospan legs have different codomains")
        da, db = int(f.dom.data.dim or 0), int(g.dom.data.dim or 0)
        stacked = np.concatenate(
            [self.matrix_of(f), self.field.neg[self.matrix_of(g)]], axis=0
        )
        kernel = self.field.nullspace(stacked.T)
        left, right = kernel[:, :da], kernel[:, da:]
        apex = self.make(kernel.shape[0], self._pulled_gram(f.dom, left))
        p1 = StructMorphism(apex, f.dom, self.table_from_matrix(apex, f.dom, left))
        p2 = StructMorphism(apex, g.dom, self.table_from_matrix(apex, g.dom, right))
        return CommutingSquare(Span(p1, p2), cospan)

    def _pulled_gram(self, obj: StructObject, matrix: np.ndarray) -> Optional[np.ndarray]:
        return None

    def _quotient(
        self, objects: Sequence[StructObject], arrows: Sequence[Arrow]
    ) -> Tuple[StructObject, List[np.ndarray]]:
        dims = [int(o.data.dim or 0) for o in objects]
        offsets = list(itertools.accumulate([0] + dims))
        n = offsets[-1]
        relations = []
        for s, t, f in arrows:
            if f.dom != objects[s] or f.cod != objects[t]:
                raise MalformedDiagramError("arrow endpoints do not match the diagram")
            for i, e in enumerate(self.basis(f.dom)):
                row = np.zeros(n, dtype=np.int64)
                row[offsets[s] + i] = 1
                for k, v in enumerate(f(e)):
                    slot = offsets[t] + k
                    row[slot] = self.field.add[row[slot], self.field.neg[v]]
                relations.append(row)
        reduced, pivots = self.field.rref(self.rows(relations, n))
        keep = [c for c in range(n) if c not in pivots]
        apex = self.make(len(keep))
        coordinates = []
        for obj, offset, d in zip(objects, offsets, dims):
            points = np.zeros((len(obj.carrier), n), dtype=np.int64)
            if d:
                points[:, offset : offset + d] = self.rows(list(obj.carrier), d)
            if pivots:
                correction = self.field.mat_mul(points[:, list(pivots)], reduced)
                points = self.field.add[points, self.field.neg[correction]]
            coordinates.append(points[:, keep])
        return apex, coordinates

    def tight_cocones(
        self, span: Span, cls: MorphismClass, max_size: int
    ) -> Iterator[Cospan]:
        """Quotients P/W of the pushout with W meeting both images trivially."""
        f, g = span.left, span.right
        pushout, coords = self._quotient([span.apex, f.cod, g.cod], [(0, 1, f), (0, 2, g)])
        p = int(pushout.data.dim or 0)
        into_a = [tuple(int(v) for v in row) for row in coords[1]]
        into_b = [tuple(int(v) for v in row) for row in coords[2]]
        image_a = self.rows([into_a[f.cod.index(e)] for e in self.basis(f.cod)], p)
        image_b = self.rows([into_b[g.cod.index(e)] for e in self.basis(g.cod)], p)
        zero = self.make(0)
        for _, basis in self.field.echelon_bases(p):
            k = len(basis)
            if p - k > max_size:
                continue
            kernel = self.rows(list(basis), p)
            if self.field.rank(np.concatenate([kernel, image_a])) < k + image_a.shape[0]:
                continue
            if self.field.rank(np.concatenate([kernel, image_b])) < k + image_b.shape[0]:
                continue
            sub = self.make(k)
            inclusion = StructMorphism(sub, pushout, self.table_from_matrix(sub, pushout, kernel))
            to_zero = StructMorphism(sub, zero, tuple(() for _ in sub.carrier))
            quotient, qcoords = self._quotient(
                [pushout, sub, zero], [(1, 0, inclusion), (1, 2, to_zero)]
            )
            project = {
                x: tuple(int(v) for v in row) for x, row in zip(pushout.carrier, qcoords[0])
            }
            left = tuple(project[y] for y in into_a)
            right = tuple(project[y] for y in into_b)
            for apex in self.forms_on(quotient, [(f.cod, left), (g.cod, right)]):
                yield Cospan(
                    StructMorphism(f.cod, apex, left), StructMorphism(g.cod, apex, right)
                )

    def forms_on(
        self, apex: StructObject, pieces: Sequence[Tuple[StructObject, Tuple[Vector, ...]]]
    ) -> Iterator[StructObject]:
        yield apex

    def glue(self, objects: Sequence[StructObject], arrows: Sequence[Arrow]) -> GlueResult:
        """Quotient of the direct sum by the identifications the arrows force."""
        apex, coordinates = self._quotient(objects, arrows)
        legs = tuple(
            StructMorphism(obj, apex, tuple(tuple(int(v) for v in row) for row in coords))
            for obj, coords in zip(objects, coordinates)
        )
        return Gluing(apex, legs)


class FinBilCategory(FinVecCategory):
    """Vector spaces with a bilinear form and form-preserving linear maps."""

    kind = StructKind.BILINEAR
    injective_name = "emb"

    def __init__(self, q: int = 2, name: Optional[str] = None, max_homs: int = 200_000) -> None:
        """Initialize the category over GF(q)."""
        super().__init__(q, name or f"fin-bil-{q}", max_homs)

    def make(self, dim: int, gram: Optional[np.ndarray] = None) -> StructObject:
        if gram is None:
            gram = np.zeros((dim, dim), dtype=np.int64)
        rows = tuple(tuple(int(v) for v in row) for row in np.asarray(gram).reshape(dim, dim))
        return StructObject(
            self.kind, self.space(dim), StructData(q=self.q, dim=dim, gram=rows)
        )

    def gram(self, obj: StructObject) -> np.ndarray:
        dim = int(obj.data.dim or 0)
        return np.array(obj.data.gram or (), dtype=np.int64).reshape(dim, dim)

    def _well_formed(self, obj: StructObject) -> bool:
        gram = obj.data.gram
        dim = obj.data.dim
        return (
            super()._well_formed(obj)
            and gram is not None
            and len(gram) == dim
            and all(len(r) == dim and all(0 <= v < self.q for v in r) for r in gram)
        )

    @lru_cache(maxsize=None)
    def form_table(self, obj: StructObject) -> np.ndarray:
        """Values of the form on all pairs of carrier vectors."""
        dim = int(obj.data.dim or 0)
        points = self.rows(list(obj.carrier), dim)
        if dim == 0:
            return np.zeros((1, 1), dtype=np.int64)
        return self.field.mat_mul(self.field.mat_mul(points, self.gram(obj)), points.T)

    def form(self, obj: StructObject, x: Vector, y: Vector) -> int:
        """The form value [x, y]."""
        return int(self.form_table(obj)[obj.index(x), obj.index(y)])

    def invariant(self, obj: StructObject) -> Tuple:
        table = self.form_table(obj)
        values = tuple(int(np.count_nonzero(table == v)) for v in range(self.q))
        diagonal = tuple(int(np.count_nonzero(np.diag(table) == v)) for v in range(self.q))
        gram = self.gram(obj)
        return (obj.data.dim, values, diagonal, self.field.rank(gram))

    def _congruent(self, left: np.ndarray, gram: np.ndarray) -> np.ndarray:
        return self.field.mat_mul(self.field.mat_mul(left, gram), left.T)

    def _preserves_form(self, dom: StructObject, cod: StructObject, matrix: np.ndarray) -> bool:
        if matrix.shape[0] == 0:
            return True
        return bool(np.array_equal(self._congruent(matrix, self.gram(cod)), self.gram(dom)))

    @lru_cache(maxsize=None)
    def enumerate_objects(self, n: int) -> Tuple[StructObject, ...]:
        seen = set()
        found = []
        group = self.field.general_linear(n)
        for entries in itertools.product(range(self.q), repeat=n * n):
            if entries in seen:
                continue
            gram = np.array(entries, dtype=np.int64).reshape(n, n)
            for p in group:
                seen.add(tuple(int(v) for v in self._congruent(p, gram).reshape(-1)))
            seen.add(entries)
            found.append(self.make(n, gram))
        logger.debug("%s: %d forms of dimension %d up to congruence", self.name, len(found), n)
        return tuple(found)

    def _sub_gram(self, obj: StructObject, basis: np.ndarray) -> Optional[np.ndarray]:
        if basis.shape[0] == 0:
            return None
        return self._congruent(basis, self.gram(obj))

    def _pulled_gram(self, obj: StructObject, matrix: np.ndarray) -> Optional[np.ndarray]:
        return self._sub_gram(obj, matrix)

    def glue(self, objects: Sequence[StructObject], arrows: Sequence[Arrow]) -> GlueResult:
        """Vector-space quotient with a Gram matrix solved from the pieces; free entries zero."""
        apex, coordinates = self._quotient(objects, arrows)
        k = int(apex.data.dim or 0)
        equations = []
        rhs = []
        for obj, coords in zip(objects, coordinates):
            gram = self.gram(obj)
            basis = self.basis(obj)
            basis_rows = np.array(
                [coords[obj.index(e)] for e in basis], dtype=np.int64
            ).reshape(len(basis), k)
            for a in range(basis_rows.shape[0]):
                for b in range(basis_rows.shape[0]):
                    equations.append(
                        self.field.mul[basis_rows[a][:, None], basis_rows[b][None, :]].reshape(-1)
                    )
                    rhs.append(int(gram[a, b]))
        matrix = self.rows([tuple(int(v) for v in eq) for eq in equations], k * k)
        solution = self.field.solve(matrix, rhs)
        if solution is None:
            return self._form_conflict(objects, coordinates, len(equations))
        apex = self.make(k, solution.reshape(k, k))
        legs = tuple(
            StructMorphism(obj, apex, tuple(tuple(int(v) for v in row) for row in coords))
            for obj, coords in zip(objects, coordinates)
        )
        return Gluing(apex, legs)

    def forms_on(
        self, apex: StructObject, pieces: Sequence[Tuple[StructObject, Tuple[Vector, ...]]]
    ) -> Iterator[StructObject]:
        """Every Gram matrix on apex restricting to the given forms along the tables."""
        k = int(apex.data.dim or 0)
        equations = []
        rhs = []
        for obj, table in pieces:
            gram = self.gram(obj)
            images = self.rows([table[obj.index(e)] for e in self.basis(obj)], k)
            for a in range(images.shape[0]):
                for b in range(images.shape[0]):
                    equations.append(
                        tuple(
                            int(v)
                            for v in self.field.mul[images[a][:, None], images[b][None, :]].reshape(-1)
                        )
                    )
                    rhs.append(int(gram[a, b]))
        matrix = self.rows(equations, k * k)
        particular = self.field.solve(matrix, rhs)
        if particular is None:
            return
        free = self.field.nullspace(matrix)
        for coeffs in itertools.product(range(self.q), repeat=free.shape[0]):
            entries = np.array(particular, dtype=np.int64)
            for c, row in zip(coeffs, free):
                entries = self.field.add[entries, self.field.mul[c, row]]
            yield self.make(k, entries.reshape(k, k))

    def _form_conflict(
        self,
        objects: Sequence[StructObject],
        coordinates: Sequence[np.ndarray],
        constraints: int,
    ) -> Obstruction:
        values: Dict[Tuple[Vector, Vector], Tuple[int, int, Vector, Vector]] = {}
        for i, (obj, coords) in enumerate(zip(objects, coordinates)):
            image = [tuple(int(v) for v in row) for row in coords]
            for x, ex in zip(obj.carrier, image):
                for y, ey in zip(obj.carrier, image):
                    value = self.form(obj, x, y)
                    seen = values.setdefault((ex, ey), (value, i, x, y))
                    if seen[0] != value:
                        return Obstruction(
                            "form-value-conflict",
                            (
                                ("left", {"object": seen[1], "pair": [seen[2], seen[3]], "value": seen[0]}),
                                ("right", {"object": i, "pair": [x, y], "value": value}),
                            ),
                        )
        return Obstruction("form-value-inconsistent", (("constraints", constraints),))
