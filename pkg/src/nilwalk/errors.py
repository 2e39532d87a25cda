"""
Errors Module

One exception hierarchy for the whole toolkit. Every error raised on purpose by
nilwalk derives from NilwalkError; each concrete class also derives from the
closest builtin so callers that only know about ValueError or RuntimeError keep
working.

Note:
    This module is an integral part of the nilwalk toolkit.
"""


class NilwalkError(Exception):
    """Base class of all nilwalk errors."""


class InvalidArgumentError(NilwalkError, ValueError):
    """An argument is outside the domain of the operation."""


class UnsupportedError(NilwalkError, NotImplementedError):
    """The backend (or the combination of inputs) does not support the operation."""


class NotInSpanError(NilwalkError, ArithmeticError):
    """Coordinate stripping did not terminate at the identity."""


class ResourceLimitError(NilwalkError, RuntimeError):
    """An enumeration, memory or wall-clock budget was exceeded."""


class ConfigError(InvalidArgumentError):
    """A run configuration violates the schema."""


__all__ = [
    "NilwalkError",
    "InvalidArgumentError",
    "UnsupportedError",
    "NotInSpanError",
    "ResourceLimitError",
    "ConfigError",
]
