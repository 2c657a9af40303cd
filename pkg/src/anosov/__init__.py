"""Exact conjugacy invariants of hyperbolic integer matrices."""

from .errors import (
    BudgetError,
    DegreeUnsupported,
    DomainError,
    FieldMismatch,
    InsufficientDigits,
    IntegerLeadingCoordinate,
    InvariantError,
    NotFactorable,
    NotHyperbolic,
    NotIrrational,
    NotNonNegative,
    NotSquarefree,
    NotUnimodular,
    ReduciblePolynomial,
    SearchExhausted,
    SingularForm,
)
from .exact_core import (
    FieldElement,
    MinimalPolynomial,
    RootInterval,
    field_mul,
    floor_of,
    isolate_real_roots,
    trace,
)

__all__ = [
    "BudgetError",
    "DegreeUnsupported",
    "DomainError",
    "FieldElement",
    "FieldMismatch",
    "InsufficientDigits",
    "IntegerLeadingCoordinate",
    "InvariantError",
    "MinimalPolynomial",
    "NotFactorable",
    "NotHyperbolic",
    "NotIrrational",
    "NotNonNegative",
    "NotSquarefree",
    "NotUnimodular",
    "ReduciblePolynomial",
    "RootInterval",
    "SearchExhausted",
    "SingularForm",
    "field_mul",
    "floor_of",
    "isolate_real_roots",
    "trace",
]
