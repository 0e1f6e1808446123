"""Finite left-handed skew Boolean algebras, their etale duals, and the
adjunctions ``Lambda_n -| lambda_n`` with the monads they induce."""

from .algebra import (BooleanAlgebra, SkewBA, SkewHom, algebra_from_stalks, boolean_power,
                      count_homs, enumerate_homs, is_homomorphism, is_isomorphic, iter_homs,
                      primitive, validate_algebra)
from .biglambda import build_biglambda
from .errors import (AxiomViolation, MalformedTable, NotBelow, NotBoolean, NotProper,
                     SizeGuard, SkewStoneError)
from .etale import EtaleSpace, sections_algebra, spectrum_etale
from .lambda_n import LambdaAlgebra
from .stone import FiniteBooleanSpace

__all__ = [
    "AxiomViolation", "BooleanAlgebra", "EtaleSpace", "FiniteBooleanSpace", "LambdaAlgebra",
    "MalformedTable", "NotBelow", "NotBoolean", "NotProper", "SizeGuard", "SkewBA", "SkewHom",
    "SkewStoneError", "algebra_from_stalks", "boolean_power", "build_biglambda", "count_homs",
    "enumerate_homs", "is_homomorphism", "is_isomorphic", "iter_homs", "primitive",
    "sections_algebra", "spectrum_etale", "validate_algebra",
]
