"""Named categories, functors, relations and suites; the CLI addresses everything by name."""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple

from indlift.backend.categories import ConcreteCategory
from indlift.backend.combinators import CoproductCategory, ProductCategory
from indlift.backend.config import Settings, SuiteConfig
from indlift.backend.errors import ResolutionError
from indlift.backend.functors import (
    ConcreteFunctor,
    bil_to_binfunc,
    bil_to_vec,
    conn_inclusion,
    coproduct_fold,
    functor_product,
    graph_to_set,
    identity_functor,
    sigma_graph_to_graph,
    sigma_set_to_set,
)
from indlift.backend.lifting import lift_relation
from indlift.backend.linear import FinBilCategory, FinVecCategory
from indlift.backend.relations import (
    IndependenceRelation,
    intersect_relations,
    product_relation,
    pullback_relation,
    relation_bil_lin,
    relation_bil_star,
    relation_binfunc,
    relation_linvec,
)
from indlift.backend.structures import (
    ConnGraphCategory,
    FinBinFuncCategory,
    FinGraphCategory,
    FinSetCategory,
    SigmaGraphCategory,
    SigmaSetCategory,
)

logger = logging.getLogger(__name__)

SECTIONS = ("categories", "functors", "relations", "suites")


@dataclass
class InstanceRegistry:
    """Lookup tables keyed by registry name, with the names each entry depends on."""

    categories: Dict[str, ConcreteCategory] = field(default_factory=dict)
    functors: Dict[str, ConcreteFunctor] = field(default_factory=dict)
    relations: Dict[str, IndependenceRelation] = field(default_factory=dict)
    suites: Dict[str, SuiteConfig] = field(default_factory=dict)
    depends: Dict[str, Tuple[str, ...]] = field(default_factory=dict)

    def _table(self, section: str) -> Dict[str, Any]:
        if section not in SECTIONS:
            raise ResolutionError(f"unknown registry section {section!r}")
        return getattr(self, section)

    def add(self, section: str, name: str, entry: Any, depends: Iterable[str] = ()) -> Any:
        table = self._table(section)
        if name in table:
            raise ResolutionError(f"{section} entry {name!r} is already registered")
        table[name] = entry
        self.depends[name] = tuple(depends)
        return entry

    def get(self, section: str, name: str) -> Any:
        """Resolve a name, listing the known names on failure."""
        table = self._table(section)
        if name not in table:
            raise ResolutionError(
                f"no {section} entry named {name!r}", {"known": sorted(table)}
            )
        return table[name]

    def category(self, name: str) -> ConcreteCategory:
        return self.get("categories", name)

    def functor(self, name: str) -> ConcreteFunctor:
        return self.get("functors", name)

    def relation(self, name: str) -> IndependenceRelation:
        return self.get("relations", name)

    def suite(self, name: str) -> SuiteConfig:
        return self.get("suites", name)

    def add_category(self, cat: ConcreteCategory) -> ConcreteCategory:
        return self.add("categories", cat.name, cat)

    def add_functor(self, F: ConcreteFunctor) -> ConcreteFunctor:
        return self.add("functors", F.name, F, (F.dom.name, F.cod.name))

    def add_relation(
        self, rel: IndependenceRelation, depends: Iterable[str] = ()
    ) -> IndependenceRelation:
        return self.add("relations", rel.name, rel, (rel.category.name, *depends))

    def remove(self, name: str) -> List[str]:
        """Drop an entry and everything depending on it; returns the dropped names."""
        dropped: List[str] = []
        pending = [name]
        while pending:
            current = pending.pop()
            for section in SECTIONS:
                table = self._table(section)
                if current in table:
                    del table[current]
                    dropped.append(current)
            self.depends.pop(current, None)
            pending.extend(n for n, deps in self.depends.items() if current in deps)
        return dropped

    def catalogue(self) -> Dict[str, List[Dict[str, Any]]]:
        """Every entry in name order."""
        return {
            "categories": [
                {
                    "name": name,
                    "kind": cat.kind.value,
                    "classes": sorted(cat.classes),
                    "default_class": cat.default_class_name,
                    "capabilities": sorted(cat.capabilities),
                }
                for name, cat in sorted(self.categories.items())
            ],
            "functors": [F.to_dict() for _, F in sorted(self.functors.items())],
            "relations": [rel.to_dict() for _, rel in sorted(self.relations.items())],
            "suites": [
                {"name": name, "checks": len(s.checks), "description": s.description}
                for name, s in sorted(self.suites.items())
            ],
        }


def _register_categories(registry: InstanceRegistry, max_homs: int) -> None:
    fin_set = registry.add_category(FinSetCategory(max_homs=max_homs))
    for cat in (
        FinGraphCategory(max_homs=max_homs),
        ConnGraphCategory(max_homs=max_homs),
        SigmaSetCategory(max_homs=max_homs),
        SigmaGraphCategory(max_homs=max_homs),
        FinVecCategory(2, max_homs=max_homs),
        FinBilCategory(2, max_homs=max_homs),
        FinBinFuncCategory(2, max_homs=max_homs),
    ):
        registry.add_category(cat)
    registry.add_category(CoproductCategory([fin_set, fin_set], max_homs=max_homs))


def _register_functors(registry: InstanceRegistry) -> None:
    cat = registry.category
    fin_set, fin_graph = cat("fin-set"), cat("fin-graph")
    fin_bil = cat("fin-bil-2")
    for F in (
        identity_functor(fin_set, "inj"),
        identity_functor(fin_graph, "emb"),
        identity_functor(fin_bil, "emb"),
        graph_to_set(fin_graph, fin_set),
        sigma_graph_to_graph(cat("sigma-graph"), fin_graph),
        sigma_set_to_set(cat("sigma-set"), fin_set),
        bil_to_vec(fin_bil, cat("fin-vec-2")),
        bil_to_binfunc(fin_bil, cat("fin-binfunc-2")),
        conn_inclusion(cat("conn-graph"), fin_graph),
        coproduct_fold(cat("fin-set-plus-fin-set"), fin_set),
    ):
        registry.add_functor(F)
    paired = functor_product([registry.functor("bil-to-vec"), registry.functor("bil-to-binfunc")])
    product = paired.cod
    assert isinstance(product, ProductCategory)
    registry.add("categories", product.name, product, ("fin-vec-2", "fin-binfunc-2"))
    registry.add(
        "functors",
        paired.name,
        paired,
        (paired.dom.name, product.name, "bil-to-vec", "bil-to-binfunc"),
    )


def _register_relations(registry: InstanceRegistry) -> None:
    cat, functor = registry.category, registry.functor
    for cat_name, class_name in (
        ("fin-set", "inj"),
        ("fin-set", "all"),
        ("fin-graph", "emb"),
        ("fin-graph", "mono"),
        ("conn-graph", "emb"),
        ("sigma-set", "inj"),
        ("sigma-graph", "emb"),
        ("fin-vec-2", "inj"),
        ("fin-set-plus-fin-set", "inj"),
    ):
        c = cat(cat_name)
        registry.add_relation(pullback_relation(c, c.morphism_class(class_name)))
    lin = registry.add_relation(relation_linvec(cat("fin-vec-2")))
    registry.add_relation(relation_bil_lin(cat("fin-bil-2")))
    registry.add_relation(relation_bil_star(cat("fin-bil-2")))
    form_zero = registry.add_relation(relation_binfunc(cat("fin-binfunc-2")))
    product = cat("fin-vec-2-x-fin-binfunc-2")
    assert isinstance(product, ProductCategory)
    registry.add_relation(product_relation(product, [lin, form_zero]), (lin.name, form_zero.name))

    lifts = (
        ("identity-fin-set", "fin-set/inj/pullback"),
        ("identity-fin-graph", "fin-graph/emb/pullback"),
        ("graph-to-set", "fin-set/inj/pullback"),
        ("sigma-graph-to-graph", "fin-graph/emb/pullback"),
        ("sigma-set-to-set", "fin-set/inj/pullback"),
        ("conn-to-graph", "fin-graph/emb/pullback"),
        ("fin-set-fold", "fin-set/inj/pullback"),
        ("bil-to-vec", lin.name),
        ("bil-to-binfunc", form_zero.name),
        ("<bil-to-vec, bil-to-binfunc>", f"prod({lin.name}, {form_zero.name})"),
    )
    for functor_name, rel_name in lifts:
        registry.add_relation(
            lift_relation(functor(functor_name), registry.relation(rel_name)),
            (functor_name, rel_name),
        )
    joint = (
        registry.relation(f"lift(bil-to-vec, {lin.name})"),
        registry.relation(f"lift(bil-to-binfunc, {form_zero.name})"),
    )
    registry.add_relation(intersect_relations(joint), tuple(r.name for r in joint))


def build_registry(settings: Optional[Settings] = None) -> InstanceRegistry:
    """The shipped instances, minus the ones the settings disable."""
    settings = settings or Settings()
    registry = InstanceRegistry()
    _register_categories(registry, settings.max_homs)
    _register_functors(registry)
    _register_relations(registry)
    for name in settings.disabled_instances:
        dropped = registry.remove(name)
        if not dropped:
            logger.warning("disabled instance %r is not registered", name)
        else:
            logger.info("disabled %s", ", ".join(dropped))
    return registry
