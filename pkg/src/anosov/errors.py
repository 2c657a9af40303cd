"""Exception hierarchy shared across the package.

Domain rejections (bad mathematical input) and budget exhaustion (bounded
searches that ran out) are kept on separate branches so the CLI can map
them to distinct exit codes.
"""


class InvariantError(Exception):
    """Base class for all package-specific errors."""


class DomainError(InvariantError):
    """Input is outside the mathematical domain of the operation."""


class FieldMismatch(DomainError):
    """Arithmetic attempted between elements of different number fields."""


class NotSquarefree(DomainError):
    """Polynomial has a repeated root where a squarefree one is required."""


class ReduciblePolynomial(DomainError):
    """Polynomial is reducible over Q where irreducibility is required."""


class NotHyperbolic(DomainError):
    """Matrix has no dominant real eigenvalue exceeding 1."""


class NotUnimodular(DomainError):
    """Matrix determinant is not +-1."""


class NotNonNegative(DomainError):
    """Matrix has negative entries where non-negative ones are required."""


class DegreeUnsupported(DomainError):
    """Operation is only implemented for quadratic fields."""


class NotIrrational(DomainError):
    """Continued-fraction expansion of a rational number was requested."""


class SingularForm(DomainError):
    """Bilinear form is degenerate; upstream module was not full."""


class IntegerLeadingCoordinate(DomainError):
    """Jacobi-Perron step hit an integer leading coordinate (expansion ends)."""


class BudgetError(InvariantError):
    """A bounded search or iteration budget was exhausted."""


class SearchExhausted(BudgetError):
    """Bounded search finished without finding the requested object."""


class NotFactorable(BudgetError):
    """No elementary-matrix factorization found within the search bounds."""


class InsufficientDigits(BudgetError):
    """More expansion digits were requested than are available."""
