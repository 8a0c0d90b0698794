#!/usr/bin/env python3
"""
Exception hierarchy shared by all simulator modules

Expected negative outcomes (a rejected difference set, a failed Turyn check,
an exhausted solver) are returned as values; these exceptions signal misuse
or broken invariants.
"""


class DiffsetError(Exception):
    """Base class for all simulator errors"""


class StructuralError(DiffsetError, ValueError):
    """Objects from different groups/fields, or malformed coordinates"""


class ResourceLimitError(DiffsetError):
    """A group or field exceeds the configured desk-scale cap"""


class DomainError(DiffsetError, ArithmeticError):
    """Operation undefined for the given value (inverse or log of zero)"""


class ParameterError(DiffsetError, ValueError):
    """A precondition on the parameters does not hold"""


class UnsupportedParameterError(ParameterError):
    """Parameters outside what this implementation supports"""


class DegenerateParameterError(ParameterError):
    """Parameters for which the construction degenerates (k = lambda)"""


class InternalConsistencyError(DiffsetError, RuntimeError):
    """An invariant that must hold by construction was violated"""


class NotADifferenceSetError(ParameterError):
    """Raised when certification of a candidate difference set fails"""

    def __init__(self, message: str, verification=None):
        super().__init__(message)
        self.verification = verification
