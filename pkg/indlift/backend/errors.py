"""Exception hierarchy for indlift."""
from typing import Any, Dict, Optional


class IndliftError(Exception):
    """Base class for all errors raised by indlift."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None) -> None:
        """Initialize the error with a message and optional structured details."""
        super().__init__(message)
        self.details: Dict[str, Any] = details or {}


class CompositionError(IndliftError):
    """Two morphisms were composed whose endpoints do not match."""


class MalformedDiagramError(IndliftError):
    """A diagram has mismatched endpoints or does not commute."""


class KindError(IndliftError):
    """An object or morphism does not belong to the category it was used with."""


class ScopeExceededError(IndliftError):
    """An enumeration grew past the configured cap."""


class CapabilityError(IndliftError):
    """A category or functor lacks the construction an operation needs."""


class ContractError(IndliftError):
    """An operation was called outside its precondition."""


class ConstructionError(IndliftError):
    """A construction that must succeed for a correct instance did not."""


class ReplayMismatchError(IndliftError):
    """A stored fixture replayed to a different status."""


class ResolutionError(IndliftError):
    """A registry reference could not be resolved."""


class ConfigError(IndliftError):
    """Settings or a suite configuration are invalid."""
