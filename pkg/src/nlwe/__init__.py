"""Certification and error bounds for local discrimination of state sets."""

from .bound import (
    BoundResult,
    OptimizerOptions,
    ProductOperator,
    discrimination_operator,
    distance_from_identity,
    error_lower_bound,
    max_radius,
    min_distance_at_radius,
    nearest_zonotope_point,
    quadratic_over_linear_gap,
    segment_distance_inequality,
    zonotope_distance,
)
from .certify import (
    CERTIFIED_INDISCRIMINABLE,
    INCONCLUSIVE,
    DyadCertificate,
    EnumerationBudgetExceeded,
    ExtendibilityResult,
    StrongNlweReport,
    UpbReport,
    certify,
    certify_cut,
    certify_minimal_upb,
    dyad_span_rank,
    exclusive_pairs,
    min_states_bound,
    minimal_upb_check,
    minimal_upb_count,
    strong_nlwe,
    upb_extendibility,
    upb_report,
)
from .families import (
    PartyCut,
    StateSet,
    bell_states,
    gentiles1,
    gentiles1_witness_dyads,
    halder_states,
    load,
    merge_cut,
    rotated_dominoes,
    save,
    tiles,
    two_qubit_demo,
)
from .linalg import (
    dyad,
    frobenius_norm,
    inner,
    numerical_rank,
    tensor,
)

__version__ = "0.1.0"

__all__ = [
    "BoundResult",
    "CERTIFIED_INDISCRIMINABLE",
    "DyadCertificate",
    "EnumerationBudgetExceeded",
    "ExtendibilityResult",
    "INCONCLUSIVE",
    "OptimizerOptions",
    "PartyCut",
    "ProductOperator",
    "StateSet",
    "StrongNlweReport",
    "UpbReport",
    "bell_states",
    "certify",
    "certify_cut",
    "certify_minimal_upb",
    "discrimination_operator",
    "distance_from_identity",
    "dyad",
    "dyad_span_rank",
    "error_lower_bound",
    "exclusive_pairs",
    "frobenius_norm",
    "gentiles1",
    "gentiles1_witness_dyads",
    "halder_states",
    "inner",
    "load",
    "max_radius",
    "merge_cut",
    "min_distance_at_radius",
    "min_states_bound",
    "minimal_upb_check",
    "minimal_upb_count",
    "nearest_zonotope_point",
    "numerical_rank",
    "quadratic_over_linear_gap",
    "rotated_dominoes",
    "save",
    "segment_distance_inequality",
    "strong_nlwe",
    "tensor",
    "tiles",
    "two_qubit_demo",
    "upb_extendibility",
    "upb_report",
    "zonotope_distance",
]
