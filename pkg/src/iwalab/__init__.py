"""Finite-level computations for finitely presented modules over Iwasawa algebras."""

from .catalog import catalog_list, catalog_module
from .charideal import CharIdealData, char_from_presentation, char_from_square_presentation, char_iota
from .fileio import InputError, load_module
from .homalg import duality_check, hom_to_gpring, verify_eta_natural
from .limits import (
    adjoint_divisors,
    build_direct_system,
    colimit_analysis,
    dual_pseudo_order_check,
    growth_invariants,
    pseudo_null_verdict,
)
from .modules import ModulePresentation, coinvariants, is_scf, norm_morphism, projection_morphism
from .poly import LambdaPolynomial
from .verify import run_verify

__all__ = [
    "CharIdealData", "InputError", "LambdaPolynomial", "ModulePresentation",
    "adjoint_divisors", "build_direct_system", "catalog_list", "catalog_module",
    "char_from_presentation", "char_from_square_presentation", "char_iota",
    "coinvariants", "colimit_analysis", "dual_pseudo_order_check", "duality_check",
    "growth_invariants", "hom_to_gpring", "is_scf", "load_module", "norm_morphism",
    "projection_morphism", "pseudo_null_verdict", "run_verify", "verify_eta_natural",
]
