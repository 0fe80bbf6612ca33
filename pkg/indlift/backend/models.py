"""Models for the indlift system."""
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import (
    Any,
    Callable,
    Dict,
    FrozenSet,
    Hashable,
    List,
    Optional,
    Tuple,
)

from pydantic import BaseModel, ConfigDict, Field

Element = Hashable


class StructKind(Enum):
    """Structure kinds carried by concrete objects."""

    SET = "set"
    GRAPH = "graph"
    VECSPACE = "vecspace"
    BILINEAR = "bilinear"
    BINFUNC = "binfunc"
    SIGMA_SET = "sigma-set"
    SIGMA_GRAPH = "sigma-graph"
    PRODUCT = "product"
    TAGGED = "tagged-component"

    def __str__(self) -> str:
        """Return string representation of the enum value."""
        return self.value


class Axiom(Enum):
    """Axioms an independence relation can be checked against."""

    INVARIANCE = "invariance"
    SEMI_INVARIANCE = "semi-invariance"
    MONOTONICITY = "monotonicity"
    TRANSITIVITY = "transitivity"
    SYMMETRY = "symmetry"
    BASIC_EXISTENCE = "basic-existence"
    EXISTENCE = "existence"
    BASE_MONOTONICITY = "base-monotonicity"
    UNIQUENESS = "uniqueness"
    THREE_AMALGAMATION = "3-amalgamation"
    STRONG_THREE_AMALGAMATION = "strong-3-amalgamation"
    UNION_FINITE_CHAIN = "union-finite-chain"

    def __str__(self) -> str:
        """Return string representation of the enum value."""
        return self.value

    @property
    def universal(self) -> bool:
        """Whether the axiom only quantifies universally over diagrams."""
        return self in UNIVERSAL_AXIOMS


UNIVERSAL_AXIOMS = frozenset(
    {
        Axiom.INVARIANCE,
        Axiom.SEMI_INVARIANCE,
        Axiom.MONOTONICITY,
        Axiom.TRANSITIVITY,
        Axiom.SYMMETRY,
        Axiom.BASIC_EXISTENCE,
    }
)


class VerdictStatus(Enum):
    """Three-valued outcome of a check, plus skipped preconditions."""

    HOLDS = "holds-within-scope"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"
    SKIPPED = "skipped"

    def __str__(self) -> str:
        """Return string representation of the enum value."""
        return self.value


def element_to_json(x: Any) -> Any:
    """Encode a carrier element; tuples become lists."""
    if isinstance(x, tuple):
        return [element_to_json(v) for v in x]
    return x


def element_from_json(x: Any) -> Any:
    """Decode a carrier element; lists become tuples."""
    if isinstance(x, list):
        return tuple(element_from_json(v) for v in x)
    return x


@dataclass(frozen=True)
class StructData:
    """Kind-specific structure payload of an object."""

    edges: FrozenSet[FrozenSet[Element]] = frozenset()
    q: Optional[int] = None
    dim: Optional[int] = None
    gram: Optional[Tuple[Tuple[int, ...], ...]] = None
    table: Optional[Tuple[Tuple[int, ...], ...]] = None
    endo: Optional[Tuple[Element, ...]] = None
    components: Optional[Tuple["StructObject", ...]] = None
    tag: Optional[int] = None
    inner: Optional["StructObject"] = None


@dataclass(frozen=True)
class StructObject:
    """A finite concrete structure: carrier plus kind-specific data."""

    kind: StructKind
    carrier: Tuple[Element, ...]
    data: StructData = field(default_factory=StructData)

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.kind, self.carrier, self.data))

    @cached_property
    def positions(self) -> Dict[Element, int]:
        """Map each carrier element to its position."""
        return {x: i for i, x in enumerate(self.carrier)}

    def index(self, x: Element) -> int:
        """Return the position of a carrier element."""
        return self.positions[x]

    @property
    def size(self) -> int:
        """Size measure: dimension for linear kinds, max over product components."""
        if self.kind in (StructKind.VECSPACE, StructKind.BILINEAR):
            return int(self.data.dim or 0)
        if self.kind == StructKind.PRODUCT:
            return max((c.size for c in self.data.components or ()), default=0)
        if self.kind == StructKind.TAGGED and self.data.inner is not None:
            return self.data.inner.size
        return len(self.carrier)

    def has_edge(self, u: Element, v: Element) -> bool:
        """Whether u and v are adjacent."""
        return frozenset((u, v)) in self.data.edges

    def sigma(self, x: Element) -> Element:
        """Apply the endomorphism of a sigma-kind object."""
        assert self.data.endo is not None
        return self.data.endo[self.index(x)]

    def sorted_edges(self) -> List[Tuple[Element, Element]]:
        """Edges as pairs ordered by carrier position."""
        pairs = []
        for edge in self.data.edges:
            u, v = sorted(edge, key=self.index)
            pairs.append((u, v))
        return sorted(pairs, key=lambda p: (self.index(p[0]), self.index(p[1])))

    def to_dict(self) -> Dict[str, Any]:
        """Convert the object to a dictionary for serialization."""
        data: Dict[str, Any] = {}
        if self.data.edges:
            data["edges"] = [
                [element_to_json(u), element_to_json(v)] for u, v in self.sorted_edges()
            ]
        if self.data.q is not None:
            data["q"] = self.data.q
        if self.data.dim is not None:
            data["dim"] = self.data.dim
        if self.data.gram is not None:
            data["gram"] = [list(row) for row in self.data.gram]
        if self.data.table is not None:
            data["table"] = [list(row) for row in self.data.table]
        if self.data.endo is not None:
            data["endo"] = [element_to_json(x) for x in self.data.endo]
        if self.data.components is not None:
            data["components"] = [c.to_dict() for c in self.data.components]
        if self.data.tag is not None:
            data["tag"] = self.data.tag
        if self.data.inner is not None:
            data["inner"] = self.data.inner.to_dict()
        return {
            "kind": self.kind.value,
            "carrier": [element_to_json(x) for x in self.carrier],
            "data": data,
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "StructObject":
        """Rebuild an object from its dictionary form."""
        data = payload.get("data", {})
        carrier = tuple(element_from_json(x) for x in payload["carrier"])
        struct = StructData(
            edges=frozenset(
                frozenset((element_from_json(u), element_from_json(v)))
                for u, v in data.get("edges", [])
            ),
            q=data.get("q"),
            dim=data.get("dim"),
            gram=tuple(tuple(r) for r in data["gram"]) if "gram" in data else None,
            table=tuple(tuple(r) for r in data["table"]) if "table" in data else None,
            endo=(
                tuple(element_from_json(x) for x in data["endo"])
                if "endo" in data
                else None
            ),
            components=(
                tuple(StructObject.from_dict(c) for c in data["components"])
                if "components" in data
                else None
            ),
            tag=data.get("tag"),
            inner=StructObject.from_dict(data["inner"]) if "inner" in data else None,
        )
        return cls(StructKind(payload["kind"]), carrier, struct)


@dataclass(frozen=True)
class StructMorphism:
    """A structure-preserving map stored as a table aligned with the domain carrier."""

    dom: StructObject
    cod: StructObject
    table: Tuple[Element, ...]

    def __call__(self, x: Element) -> Element:
        return self.table[self.dom.index(x)]

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.dom, self.cod, self.table))

    @cached_property
    def image(self) -> FrozenSet[Element]:
        """The set-theoretic image in the codomain carrier."""
        return frozenset(self.table)

    def is_injective(self) -> bool:
        """Whether the underlying map of carriers is injective."""
        return len(self.image) == len(self.table)

    def is_surjective(self) -> bool:
        """Whether the underlying map of carriers is surjective."""
        return len(self.image) == len(self.cod.carrier)

    def to_dict(self) -> Dict[str, Any]:
        """Convert the morphism to a dictionary for serialization."""
        return {
            "dom": self.dom.to_dict(),
            "cod": self.cod.to_dict(),
            "map": [element_to_json(y) for y in self.table],
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "StructMorphism":
        """Rebuild a morphism from its dictionary form."""
        return cls(
            StructObject.from_dict(payload["dom"]),
            StructObject.from_dict(payload["cod"]),
            tuple(element_from_json(y) for y in payload["map"]),
        )


@dataclass(frozen=True)
class MorphismClass:
    """A named, decidable class of morphisms."""

    name: str
    member: Callable[[StructMorphism], bool] = field(compare=False, hash=False)
    injective: bool = False
    reflecting: bool = False
    left_cancellable: bool = False
    ambient: bool = False

    def __contains__(self, f: StructMorphism) -> bool:
        return self.member(f)

    def to_dict(self) -> Dict[str, Any]:
        """Convert the class to a dictionary for serialization."""
        return {"name": self.name, "injective": self.injective}


@dataclass(frozen=True)
class Span:
    """A span C -> A, C -> B."""

    left: StructMorphism
    right: StructMorphism

    @property
    def apex(self) -> StructObject:
        """The common source C."""
        return self.left.dom

    def to_dict(self) -> Dict[str, Any]:
        """Convert the span to a dictionary for serialization."""
        return {"left": self.left.to_dict(), "right": self.right.to_dict()}

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "Span":
        """Rebuild a span from its dictionary form."""
        return cls(
            StructMorphism.from_dict(payload["left"]),
            StructMorphism.from_dict(payload["right"]),
        )


@dataclass(frozen=True)
class Cospan:
    """A cospan A -> D, B -> D."""

    left: StructMorphism
    right: StructMorphism

    @property
    def apex(self) -> StructObject:
        """The common target D."""
        return self.left.cod

    def to_dict(self) -> Dict[str, Any]:
        """Convert the cospan to a dictionary for serialization."""
        return {"left": self.left.to_dict(), "right": self.right.to_dict()}

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "Cospan":
        """Rebuild a cospan from its dictionary form."""
        return cls(
            StructMorphism.from_dict(payload["left"]),
            StructMorphism.from_dict(payload["right"]),
        )


@dataclass(frozen=True)
class CommutingSquare:
    """A base span C -> A, C -> B with a cocone A -> M, B -> M."""

    span: Span
    cocone: Cospan

    @property
    def c(self) -> StructObject:
        return self.span.apex

    @property
    def a(self) -> StructObject:
        return self.span.left.cod

    @property
    def b(self) -> StructObject:
        return self.span.right.cod

    @property
    def m(self) -> StructObject:
        return self.cocone.apex

    @property
    def morphisms(self) -> Tuple[StructMorphism, ...]:
        """The four morphisms: C->A, C->B, A->M, B->M."""
        return (self.span.left, self.span.right, self.cocone.left, self.cocone.right)

    def transpose(self) -> "CommutingSquare":
        """Swap the roles of A and B."""
        return CommutingSquare(
            Span(self.span.right, self.span.left),
            Cospan(self.cocone.right, self.cocone.left),
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert the square to a dictionary for serialization."""
        return {"span": self.span.to_dict(), "cocone": self.cocone.to_dict()}

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "CommutingSquare":
        """Rebuild a square from its dictionary form."""
        return cls(Span.from_dict(payload["span"]), Cospan.from_dict(payload["cocone"]))


@dataclass(frozen=True)
class Horn:
    """The solid diagram of 3-amalgamation over M with faces N1, N2, N3."""

    m_to_a: StructMorphism
    m_to_b: StructMorphism
    m_to_c: StructMorphism
    a_to_n1: StructMorphism
    b_to_n1: StructMorphism
    a_to_n2: StructMorphism
    c_to_n2: StructMorphism
    b_to_n3: StructMorphism
    c_to_n3: StructMorphism

    @property
    def faces(self) -> Tuple[CommutingSquare, CommutingSquare, CommutingSquare]:
        """The faces (M,A,B,N1), (M,A,C,N2), (M,B,C,N3)."""
        return (
            CommutingSquare(
                Span(self.m_to_a, self.m_to_b), Cospan(self.a_to_n1, self.b_to_n1)
            ),
            CommutingSquare(
                Span(self.m_to_a, self.m_to_c), Cospan(self.a_to_n2, self.c_to_n2)
            ),
            CommutingSquare(
                Span(self.m_to_b, self.m_to_c), Cospan(self.b_to_n3, self.c_to_n3)
            ),
        )

    @property
    def objects(self) -> Tuple[StructObject, ...]:
        """M, A, B, C, N1, N2, N3 in that order."""
        return (
            self.m_to_a.dom,
            self.m_to_a.cod,
            self.m_to_b.cod,
            self.m_to_c.cod,
            self.a_to_n1.cod,
            self.a_to_n2.cod,
            self.b_to_n3.cod,
        )

    @property
    def arrows(self) -> List[Tuple[int, int, StructMorphism]]:
        """The nine solid arrows as (source index, target index, morphism)."""
        return [
            (0, 1, self.m_to_a),
            (0, 2, self.m_to_b),
            (0, 3, self.m_to_c),
            (1, 4, self.a_to_n1),
            (2, 4, self.b_to_n1),
            (1, 5, self.a_to_n2),
            (3, 5, self.c_to_n2),
            (2, 6, self.b_to_n3),
            (3, 6, self.c_to_n3),
        ]

    def to_dict(self) -> Dict[str, Any]:
        """Convert the horn to a dictionary for serialization."""
        return {
            "m_to_a": self.m_to_a.to_dict(),
            "m_to_b": self.m_to_b.to_dict(),
            "m_to_c": self.m_to_c.to_dict(),
            "a_to_n1": self.a_to_n1.to_dict(),
            "b_to_n1": self.b_to_n1.to_dict(),
            "a_to_n2": self.a_to_n2.to_dict(),
            "c_to_n2": self.c_to_n2.to_dict(),
            "b_to_n3": self.b_to_n3.to_dict(),
            "c_to_n3": self.c_to_n3.to_dict(),
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "Horn":
        """Rebuild a horn from its dictionary form."""
        return cls(**{k: StructMorphism.from_dict(v) for k, v in payload.items()})


@dataclass(frozen=True)
class Cube:
    """A horn with an apex N receiving N1, N2, N3."""

    horn: Horn
    n1_to_n: StructMorphism
    n2_to_n: StructMorphism
    n3_to_n: StructMorphism

    @property
    def top_faces(self) -> Tuple[CommutingSquare, CommutingSquare, CommutingSquare]:
        """The faces (A,N1,N2,N), (B,N1,N3,N), (C,N2,N3,N)."""
        h = self.horn
        return (
            CommutingSquare(
                Span(h.a_to_n1, h.a_to_n2), Cospan(self.n1_to_n, self.n2_to_n)
            ),
            CommutingSquare(
                Span(h.b_to_n1, h.b_to_n3), Cospan(self.n1_to_n, self.n3_to_n)
            ),
            CommutingSquare(
                Span(h.c_to_n2, h.c_to_n3), Cospan(self.n2_to_n, self.n3_to_n)
            ),
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert the cube to a dictionary for serialization."""
        return {
            "horn": self.horn.to_dict(),
            "n1_to_n": self.n1_to_n.to_dict(),
            "n2_to_n": self.n2_to_n.to_dict(),
            "n3_to_n": self.n3_to_n.to_dict(),
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "Cube":
        """Rebuild a cube from its dictionary form."""
        return cls(
            Horn.from_dict(payload["horn"]),
            StructMorphism.from_dict(payload["n1_to_n"]),
            StructMorphism.from_dict(payload["n2_to_n"]),
            StructMorphism.from_dict(payload["n3_to_n"]),
        )


@dataclass(frozen=True)
class Subobject:
    """An m-class morphism into an ambient object, up to iso over the ambient."""

    ambient: StructObject
    rep: StructMorphism

    @property
    def obj(self) -> StructObject:
        """The domain of the representing morphism."""
        return self.rep.dom

    def to_dict(self) -> Dict[str, Any]:
        """Convert the subobject to a dictionary for serialization."""
        return {"rep": self.rep.to_dict()}


@dataclass(frozen=True)
class Obstruction:
    """A certified reason why no amalgam or completion exists."""

    reason: str
    details: Tuple[Tuple[str, Any], ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        """Convert the obstruction to a dictionary for serialization."""
        return {"reason": self.reason, **{k: v for k, v in self.details}}


class Scope(BaseModel):
    """Bounds for every enumeration performed by a check."""

    model_config = ConfigDict(frozen=True)

    max_object_size: int = Field(3, gt=0)
    max_completion_size: int = Field(6, gt=0)
    max_homs: int = Field(200_000, gt=0)
    exhaustive: bool = True
    seed: int = 0
    sample_size: int = Field(200, gt=0)
    chain_length: int = Field(4, gt=0)

    def to_dict(self) -> Dict[str, Any]:
        """Convert the scope to a dictionary for serialization."""
        return self.model_dump()


@dataclass
class Verdict:
    """Outcome of a check with its witness or certificate."""

    relation: str
    check: str
    status: VerdictStatus
    scope: Scope
    witness: Optional[Dict[str, Any]] = None
    certificate: Optional[Dict[str, Any]] = None
    obligations: int = 0
    notes: List[str] = field(default_factory=list)
    elapsed: Optional[float] = None

    @property
    def holds(self) -> bool:
        """Whether the check held within scope."""
        return self.status == VerdictStatus.HOLDS

    def to_dict(self) -> Dict[str, Any]:
        """Convert the verdict to a dictionary for serialization."""
        timing: Dict[str, Any] = {"obligations": self.obligations}
        if self.elapsed is not None:
            timing["seconds"] = round(self.elapsed, 3)
        return {
            "relation": self.relation,
            "axiom": self.check,
            "status": self.status.value,
            "scope": self.scope.to_dict(),
            "witness": self.witness,
            "certificate": self.certificate,
            "timing": timing,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "Verdict":
        """Rebuild a verdict from its dictionary form."""
        return cls(
            relation=payload["relation"],
            check=payload["axiom"],
            status=VerdictStatus(payload["status"]),
            scope=Scope(**payload["scope"]),
            witness=payload.get("witness"),
            certificate=payload.get("certificate"),
            obligations=payload.get("timing", {}).get("obligations", 0),
            notes=list(payload.get("notes", [])),
        )
