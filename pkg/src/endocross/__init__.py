"""Crossed products of finite-dimensional C*-algebras by endomorphisms."""

from .algebra import AlgElement, BlockIdeal, FdAlgebra, annihilator, distance_to_ideal, quotient
from .endo import (
    DualSystem,
    Endomorphism,
    apply,
    compose,
    dual_partial_map,
    image_unit,
    invariant,
    kernel_ideal,
    power,
    preimage_ideal,
    topologically_free,
)
from .errors import DomainError, ResourceError, UnsupportedPatternError, ValidationError
from .matcalc import DiagonalPart, MatElement, adjoint, diagonal, gauge, lambda_shift, n_k, pushforward, star

__version__ = "0.1.0"

__all__ = [
    "AlgElement", "BlockIdeal", "FdAlgebra", "annihilator", "distance_to_ideal", "quotient",
    "DualSystem", "Endomorphism", "apply", "compose", "dual_partial_map", "image_unit", "invariant",
    "kernel_ideal", "power", "preimage_ideal", "topologically_free",
    "DomainError", "ResourceError", "UnsupportedPatternError", "ValidationError",
    "DiagonalPart", "MatElement", "adjoint", "diagonal", "gauge", "lambda_shift", "n_k", "pushforward", "star",
]
