"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class MultimicroError(Exception):
    """Base class."""


class InputError(MultimicroError, ValueError):
    """Malformed input (dimension mismatch, bad indices, schema violation)."""


class EmptyError(MultimicroError, ValueError):
    """An operation needing a nonempty set received an empty one."""


class PreconditionError(MultimicroError, ValueError):
    """Input is well formed but violates an operation's precondition."""


class ResourceError(MultimicroError, RuntimeError):
    """A configured size guard was exceeded."""


class InternalConsistencyError(MultimicroError, AssertionError):
    """Two independent routes disagreed; always a defect."""


class ConstructionError(MultimicroError, AssertionError):
    """A certificate built by a constructive routine failed its own verifier."""


class SearchFailure(MultimicroError, RuntimeError):
    """A bounded parameter search did not succeed."""


class NonPolyhedralError(MultimicroError, RuntimeError):
    """The requested limit set is not a finite union of polyhedra here."""
