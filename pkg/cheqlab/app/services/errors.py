"""Exception hierarchy shared by every cheqlab service.

Commands translate these into exit codes: ``BudgetError`` subclasses mean
"gave up" (exit 3), every other ``CheqlabError`` means bad input (exit 2).
Only the message is passed positionally so instances pickle cleanly across
worker processes.
"""
from __future__ import annotations

from typing import Any, Optional


class CheqlabError(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str = "", **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    def __str__(self) -> str:
        return self.message


class BudgetError(CheqlabError):
    """A configured size or search budget was exceeded."""


class SizeGuardError(BudgetError):
    def __init__(self, message: str = "", requested: Optional[int] = None, budget: Optional[int] = None) -> None:
        super().__init__(message, requested=requested, budget=budget)
        self.requested = requested
        self.budget = budget


class SearchBudgetError(BudgetError):
    def __init__(self, message: str = "", estimate: Optional[int] = None, budget: Optional[int] = None) -> None:
        super().__init__(message, estimate=estimate, budget=budget)
        self.estimate = estimate
        self.budget = budget


class CycleError(CheqlabError):
    pass


class DuplicateLabelError(CheqlabError):
    pass


class PointIndexError(CheqlabError):
    pass


class UnknownPointError(CheqlabError):
    pass


class EmptySeedError(CheqlabError):
    pass


class NotRootedError(CheqlabError):
    pass


class ForeignUpSetError(CheqlabError):
    """Upsets (or valuations) of two different posets were mixed."""


class NotUpwardClosedError(CheqlabError):
    pass


class LabelError(CheqlabError):
    pass


class NotAtomError(LabelError):
    pass


class LengthError(LabelError):
    pass


class ParseError(CheqlabError):
    def __init__(self, message: str = "", position: int = 0, expected: str = "") -> None:
        super().__init__(message, position=position, expected=expected)
        self.position = position
        self.expected = expected

    def __str__(self) -> str:
        if self.expected:
            return f"{self.message} at position {self.position} (expected {self.expected})"
        return f"{self.message} at position {self.position}"


class UnknownAxiomError(CheqlabError):
    pass


class UnboundVariableError(CheqlabError):
    pass


class VariableNameError(CheqlabError):
    pass


class BadIndexError(CheqlabError):
    pass


class MapError(CheqlabError):
    pass


class DocumentError(CheqlabError):
    pass


class ConfigError(CheqlabError):
    pass
