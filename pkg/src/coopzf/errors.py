"""Exception types shared across the package.

Every error raised intentionally by this package derives from
:class:`CoopZfError`, so callers can catch one base type.  The concrete
subclasses distinguish caller mistakes (bad parameters, violated
preconditions, unsupported inputs) from internal failures (a linear solve
that unexpectedly degenerates, a decomposition search that comes up empty)
and from deliberate resource guards on exponential searches.
"""

from __future__ import annotations


class CoopZfError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(CoopZfError):
    """A parameter is outside the domain an operation supports."""


class PreconditionViolationError(CoopZfError):
    """An input object fails a documented structural precondition."""


class UnsupportedError(CoopZfError):
    """The request is well-formed but outside what is implemented."""


class SolverFailureError(CoopZfError):
    """A numeric solve degenerated (singular system, no solution)."""


class DecompositionFailureError(CoopZfError):
    """A structural decomposition search found no valid result."""


class ResourceLimitError(CoopZfError):
    """An exact search exceeded its node or time budget."""
