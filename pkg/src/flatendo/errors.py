"""Exception hierarchy.

Negative mathematical answers (not a member, no witness, inconsistent
system) are returned as values; exceptions are for bad input and for
broken internal invariants.
"""


class FlatendoError(Exception):
    pass


class InputError(FlatendoError, ValueError):
    """Malformed or mathematically invalid input (CLI exit code 2)."""


class DimensionError(InputError):
    pass


class SingularMatrixError(InputError):
    pass


class GroupBuildError(InputError):
    """Generators/lattice do not describe a crystallographic group."""


class PreconditionError(InputError):
    """An operation was called outside its documented precondition."""


class QuotientTooLarge(InputError):
    pass


class InvariantViolation(FlatendoError):
    """A postcondition failed; indicates a bug (CLI exit code 3)."""
