"""Exact and modular ring arithmetic."""

from .fields import GF, QQ, Elem, ExtensionField, Field, NumberField, PrimeField, RationalField
from .modular import crt_combine, good_primes, rational_reconstruct
from .poly import (
    Poly,
    count_distinct_roots,
    is_irreducible,
    poly_gcd,
    poly_xgcd,
    powmod,
    resultant,
    roots,
    squarefree_part,
    sylvester_resultant,
)

__all__ = [
    "GF", "QQ", "Elem", "ExtensionField", "Field", "NumberField", "PrimeField", "RationalField",
    "crt_combine", "good_primes", "rational_reconstruct",
    "Poly", "count_distinct_roots", "is_irreducible", "poly_gcd", "poly_xgcd", "powmod",
    "resultant", "roots", "squarefree_part", "sylvester_resultant",
]
