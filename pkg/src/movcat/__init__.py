"""Finite categories, movability deciders, inverse systems and the comma-category bridge."""

from .construct import CommaCategory, comma_category, find_initial, find_null_family, find_pullback
from .errors import DiagnosticError, InvalidInput, MovcatError, Violation
from .fincat import (
    FinCategory,
    RawCategory,
    SubcategorySpec,
    dual,
    from_function_table,
    full_subcategory,
    product,
    restrict,
    validate_category,
)
from .movability import (
    MovabilityWitness,
    UniformMovabilityWitness,
    decide_category,
    decide_movable,
    decide_uniformly_movable,
    verify_witness,
)
from .shapebridge import corollary_sequence_check, theorem_check
from .workspace import Workspace, load_workspace, parse_workspace, print_workspace

__all__ = [
    "CommaCategory",
    "DiagnosticError",
    "FinCategory",
    "InvalidInput",
    "MovabilityWitness",
    "MovcatError",
    "RawCategory",
    "SubcategorySpec",
    "UniformMovabilityWitness",
    "Violation",
    "Workspace",
    "comma_category",
    "corollary_sequence_check",
    "decide_category",
    "decide_movable",
    "decide_uniformly_movable",
    "dual",
    "find_initial",
    "find_null_family",
    "find_pullback",
    "from_function_table",
    "full_subcategory",
    "load_workspace",
    "parse_workspace",
    "print_workspace",
    "product",
    "restrict",
    "theorem_check",
    "validate_category",
    "verify_witness",
]
