"""Two-level cross-array designs studied through their indicator functions.

The package enumerates fractions of a control-by-noise full factorial that
satisfy marginal uniformity constraints, classifies them under the factor
symmetry group, and computes quotient-ring bases and confounding matrices.
"""
from __future__ import annotations

from .designs import (
    DEFAULT_SPEC,
    Design,
    FactorSpec,
    MarginalTable,
    check_crossed_profile,
    direct_product,
    extend_response,
    is_uniform,
    marginal,
    marginal_profile,
    strength,
)
from .enumeration import (
    ConstraintSet,
    GroupElement,
    apply_group,
    build_constraints,
    canonical_reps,
    canonical_word,
    classify_orbits,
    coefficient_constraints,
    enumerate_by_coefficients,
    enumerate_designs,
    group_elements,
    orbit_closure,
)
from .polyalg import (
    DimensionError,
    DomainError,
    Monomial,
    MultilinearPoly,
    coeffs_from_response,
    is_indicator,
    multiply_mod_squares,
    response_from_coeffs,
)
from .quotient import (
    DEFAULT_ORDER,
    ConfoundingMatrix,
    QuotientBasis,
    TermOrder,
    confounding_matrix,
    estimable_subset,
    normal_form,
    quotient_basis,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_SPEC",
    "Design",
    "FactorSpec",
    "MarginalTable",
    "check_crossed_profile",
    "direct_product",
    "extend_response",
    "is_uniform",
    "marginal",
    "marginal_profile",
    "strength",
    "ConstraintSet",
    "GroupElement",
    "apply_group",
    "build_constraints",
    "canonical_reps",
    "canonical_word",
    "classify_orbits",
    "coefficient_constraints",
    "enumerate_by_coefficients",
    "enumerate_designs",
    "group_elements",
    "orbit_closure",
    "DimensionError",
    "DomainError",
    "Monomial",
    "MultilinearPoly",
    "coeffs_from_response",
    "is_indicator",
    "multiply_mod_squares",
    "response_from_coeffs",
    "DEFAULT_ORDER",
    "ConfoundingMatrix",
    "QuotientBasis",
    "TermOrder",
    "confounding_matrix",
    "estimable_subset",
    "normal_form",
    "quotient_basis",
]
