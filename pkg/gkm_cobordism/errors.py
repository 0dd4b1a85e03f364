"""Exception types raised by the cobordism library.

All of them derive from ``ValueError`` so callers that only care about
"bad input" can keep catching that.
"""

from __future__ import annotations


class CobordismError(ValueError):
    """Base class for every library error."""


class ConfigError(CobordismError):
    """Invalid run configuration (order, law name, output format)."""


class VariableCountError(CobordismError):
    """Series or characters living over tori of different rank."""


class TruncationError(CobordismError):
    """A request that the truncated model cannot honour.

    Raised for nonzero constant terms where a series of t-order >= 1 is
    required, for missing or non-invertible linear terms, and for orders
    outside the supported range.
    """


class NotDivisibleError(CobordismError):
    """Exact division by a Chern class (or a series) left a remainder."""

    def __init__(self, message: str, obstruction=None):
        super().__init__(message)
        self.obstruction = obstruction


class InvalidDatumError(CobordismError):
    """A GKM datum, tuple or weight file violates its invariants."""


class UnresolvedSurfaceKindError(CobordismError):
    """The horospherical builder found a surface whose kind is not tabulated."""

    def __init__(self, message: str, family: int | None = None, pairings=None, datum=None):
        super().__init__(message)
        self.family = family
        self.pairings = pairings
        self.datum = datum


class CongruenceError(CobordismError):
    """A tuple fails the congruences an operation requires of it."""

    def __init__(self, message: str, failures=None):
        super().__init__(message)
        self.failures = failures or []
