"""Wigner functions of Fock-truncated states and the geometry of Wigner positivity."""

from .exceptions import (
    ContractError,
    DimensionError,
    DomainError,
    PreconditionError,
    WignerPosError,
)
from .fock import (
    ValidationReport,
    SpectralDecomposition,
    combine,
    density_matrix,
    fock_state,
    hermitian_unit_trace,
    hs_inner,
    mixture,
    pure_state,
    rank,
    spectral,
    subspace_support,
    trace_norm,
    vacuum,
    validate,
)
from .wigner import (
    PhasePoint,
    SymplecticMap,
    WignerPolynomial,
    displacement_matrix,
    hermite_function,
    laguerre,
    transform_evaluator,
    wigner_by_quadrature,
    wigner_eval,
    wigner_mn,
    wigner_polynomial,
)
from .positivity import (
    NodalReport,
    PositivityCertificate,
    global_min,
    is_wigner_positive,
    negative_region_bound,
    nodal_set,
    search_radius,
)
from .geometry import (
    BoundaryResult,
    SegmentClassification,
    affine_generator_decomposition,
    boundary_classification,
    boundary_state,
    classify_segment,
    extreme_candidate_check,
    face_membership,
    interior_membership,
    k_zero,
)
from .scenarios import (
    ConeSpec3D,
    analytic_t0_2d,
    boundary_curve_2d,
    cone_sweep_3d,
    family_2d,
    family_3d,
)

__version__ = "0.1.0"
