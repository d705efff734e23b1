"""Exact verification of maximal curves over GF(q^2) and their Hermitian embeddings."""

from .embed import (
    ParametrizedCurve,
    containment_check_symbolic,
    dual_form_from_curve,
    hyperplane_valuation,
    osculating_hyperplane,
    solve_dual_form,
    tangent_divisor_check,
)
from .families import FAMILY_IDS, construct_family, maximality_verdict, splitting_check, verify_family_identities
from .gf import (
    CapExceeded,
    FieldCtx,
    FieldElem,
    FieldError,
    conjugate,
    construct_field,
    embed,
    norm_to_subfield,
    restrict,
    trace_to_subfield,
)
from .hermitian import (
    HermitianForm,
    Hyperplane,
    ProjPoint,
    diagonalize_congruence,
    enumerate_variety_points,
    find_projection_center,
    tangent_hyperplane,
)
from .plane_model import PlaneCurve, affine_points, branch_expansion
from .poly import MultiPoly, TruncatedSeries, hasse_derivative
from .wronskian import lemma42_check, lemma45_valuation, wronskian

__version__ = "0.1.0"

__all__ = [
    "CapExceeded", "FAMILY_IDS", "FieldCtx", "FieldElem", "FieldError", "HermitianForm", "Hyperplane",
    "MultiPoly", "ParametrizedCurve", "PlaneCurve", "ProjPoint", "TruncatedSeries", "affine_points",
    "branch_expansion", "conjugate", "construct_family", "construct_field", "containment_check_symbolic",
    "diagonalize_congruence", "dual_form_from_curve", "embed", "enumerate_variety_points",
    "find_projection_center", "hasse_derivative", "hyperplane_valuation", "lemma42_check", "lemma45_valuation",
    "maximality_verdict", "norm_to_subfield", "osculating_hyperplane", "restrict", "solve_dual_form",
    "splitting_check", "tangent_divisor_check", "tangent_hyperplane", "trace_to_subfield",
    "verify_family_identities", "wronskian",
]
