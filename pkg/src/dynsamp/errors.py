"""Exception types raised across the package."""


class DynsampError(Exception):
    """Base class for all package errors."""


class DomainError(DynsampError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class DecompositionError(DynsampError):
    """Subspaces that should form a direct sum do not."""


class SizeError(DynsampError, ValueError):
    """Input too large for an exhaustive routine."""


class StabilityError(DynsampError):
    """Operator is not stable enough for the requested computation."""


class ConvergenceError(DynsampError):
    """A LAPACK routine failed to converge."""


class SchemaError(DynsampError):
    """Input document failed schema validation.

    ``path`` holds the JSON path of the offending element.
    """

    def __init__(self, message, path="$"):
        super().__init__(f"{path}: {message}")
        self.path = path
