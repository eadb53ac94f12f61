"""PSD-cone optimization contract and the spectrum feasibility programs."""

from .backends import conic_solve, HAVE_CVXPY, DEFAULT_MAX_ITER
from .conic import (
    ConicProblem,
    ConicResult,
    InfeasibilityCertificate,
    PsdBlock,
    farkas_problem,
    extract_certificate,
    verify_certificate,
    hermitian_basis,
    matrix_to_params,
    params_to_matrix,
)
from .programs import (
    DecompositionCheck,
    DualCertificate,
    MaxOverlapResult,
    SpectrumCheck,
    build_decomposability,
    build_dual_feasibility,
    build_max_neg_witness,
    build_max_overlap,
    build_primal_min,
    decomposable_spectrum_check,
    decomposable_spectrum_check_2d,
    decomposable_spectrum_check_3d,
    dual_feasibility_margins,
    dual_margin_2d,
    is_decomposable_witness,
    max_neg_witness_from_overlap,
    max_overlap_ppt,
    primal_min_value,
    primal_min_values,
    recompute_slack,
)

__all__ = [
    "ConicProblem",
    "ConicResult",
    "InfeasibilityCertificate",
    "PsdBlock",
    "conic_solve",
    "farkas_problem",
    "extract_certificate",
    "verify_certificate",
    "hermitian_basis",
    "matrix_to_params",
    "params_to_matrix",
    "DecompositionCheck",
    "DualCertificate",
    "MaxOverlapResult",
    "SpectrumCheck",
    "build_decomposability",
    "build_dual_feasibility",
    "build_max_neg_witness",
    "build_max_overlap",
    "build_primal_min",
    "decomposable_spectrum_check",
    "decomposable_spectrum_check_2d",
    "decomposable_spectrum_check_3d",
    "dual_feasibility_margins",
    "dual_margin_2d",
    "is_decomposable_witness",
    "max_neg_witness_from_overlap",
    "max_overlap_ppt",
    "primal_min_value",
    "primal_min_values",
    "recompute_slack",
    "HAVE_CVXPY",
    "DEFAULT_MAX_ITER",
]
