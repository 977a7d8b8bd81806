"""Exact arithmetic, graded-commutative algebras and linear algebra."""

from .algebra import (
    AlgebraElement,
    DgAlgebra,
    GeneratorSpec,
    PresentationError,
    apply_differential,
    multiply,
    normalize_monomial,
)
from .fields import QQ, PrimeField, RationalField, field_from_spec
from .linalg import Echelon, SparseMatrix, rank, rank_and_kernel

__all__ = [
    "AlgebraElement", "DgAlgebra", "GeneratorSpec", "PresentationError",
    "apply_differential", "multiply", "normalize_monomial",
    "QQ", "PrimeField", "RationalField", "field_from_spec",
    "Echelon", "SparseMatrix", "rank", "rank_and_kernel",
]
