"""Shared fixtures for the indlift tests."""
import pytest

from indlift.backend.models import Scope, StructData, StructKind, StructObject
from indlift.backend.registry import build_registry
from indlift.backend.services import SuiteService
from indlift.backend.structures import FinGraphCategory, FinSetCategory

INDLIFT_ENV = (
    "INDLIFT_MAX_OBJECT_SIZE",
    "INDLIFT_MAX_COMPLETION_SIZE",
    "INDLIFT_MAX_HOMS",
    "INDLIFT_DISABLED",
    "INDLIFT_TIMINGS",
)


def set_object(n):
    """The finite set {0, ..., n-1}."""
    return StructObject(StructKind.SET, tuple(range(n)))


def graph_object(n, edges=()):
    """A graph on {0, ..., n-1} with the given edges."""
    return StructObject(
        StructKind.GRAPH,
        tuple(range(n)),
        StructData(edges=frozenset(frozenset(e) for e in edges)),
    )


@pytest.fixture(scope="session")
def registry():
    """The shipped registry, built once."""
    return build_registry()


@pytest.fixture(scope="session")
def service():
    """A suite service over the default registry."""
    return SuiteService()


@pytest.fixture
def fin_set():
    return FinSetCategory()


@pytest.fixture
def fin_graph():
    return FinGraphCategory()


@pytest.fixture
def tiny():
    """Objects of size at most one."""
    return Scope(max_object_size=1, max_completion_size=3)


@pytest.fixture
def small():
    """Objects of size at most two."""
    return Scope(max_object_size=2, max_completion_size=4)
