"""Exception hierarchy shared by all engines.

The CLI maps these onto exit codes: input problems exit 2, capacity
problems exit 3.  A falsified invariant is never an exception; it is a
report with ``ok == False``.
"""

from __future__ import annotations


class NFoldError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(NFoldError, ValueError):
    """Malformed input: bad extents, bad tables, bad JSON payloads."""


class CapacityError(NFoldError):
    """A configured size cap would be exceeded."""


class MoveError(NFoldError, ValueError):
    """A rewrite move does not match the tree at its position."""


class ComposabilityError(NFoldError, ValueError):
    """Two morphisms do not share the face they are glued along."""


class TerminationViolation(NFoldError):
    """Normalization exceeded its step cap: a descending chain did not end."""

    def __init__(self, message: str, steps: int):
        super().__init__(message)
        self.steps = steps
