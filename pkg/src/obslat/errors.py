"""Shared exception types.

Every error that a caller may want to handle programmatically carries an
optional ``witness`` payload: a JSON-serializable object naming the concrete
counterexample or offending datum.
"""
from __future__ import annotations


class ObslatError(Exception):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InputError(ObslatError):
    """Malformed or inconsistent input data (bad file, bad relation, bad name)."""


class PreconditionError(ObslatError):
    """An operation was invoked outside its stated domain."""


class ResourceError(ObslatError):
    """A size cap was exceeded."""


class CheckFailure(ObslatError):
    """A mathematical check failed; ``witness`` names the counterexample."""
