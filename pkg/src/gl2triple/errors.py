"""Exception hierarchy shared by all modules.

Exit-code contract for the CLI: MathCheckError -> 1, everything else
(budget, precision, configuration) -> 2.
"""


class Gl2TripleError(Exception):
    """Base class for all package errors."""


class PrecisionError(Gl2TripleError):
    """A truncated-arithmetic result cannot be certified at the working precision."""


class BudgetError(Gl2TripleError):
    """An enumeration would exceed the configured coset budget."""


class ConfigurationError(Gl2TripleError):
    """The requested computation is outside the implemented configurations."""


class BoundaryCharacterError(ConfigurationError):
    """A regularized geometric tail has ratio 1 and admits no closed form."""


class InvariantError(Gl2TripleError):
    """A stored object violates one of its construction invariants."""


class MathCheckError(Gl2TripleError):
    """A mathematical identity that should hold numerically failed to hold."""


class UnsupportedOperation(ConfigurationError):
    """Honest refusal: the abstract model does not carry this operation."""
