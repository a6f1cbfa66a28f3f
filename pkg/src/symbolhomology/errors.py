"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class SymbolError(Exception):
    """Base class for every error raised by this package."""


class AdjacentRepeat(SymbolError, ValueError):
    pass


class IncompleteDecoration(SymbolError, ValueError):
    pass


class MissingFlowIn(SymbolError, ValueError):
    pass


class AmbiguousSlot(SymbolError, ValueError):
    pass


class MaslovBound(SymbolError, ValueError):
    pass


class DimensionMismatch(SymbolError, ValueError):
    pass


class Unsupported(SymbolError):
    pass


class ParseError(SymbolError, ValueError):
    pass


class InconsistentComplex(SymbolError, ValueError):
    pass


class NonEmbeddedDomain(SymbolError):
    pass


class MalformedEnd(SymbolError, ValueError):
    pass


class ClosureEscape(SymbolError):
    pass


class StratumBoundExceeded(SymbolError):
    pass
