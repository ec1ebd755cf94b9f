"""Twisted-commutator diagnostics for gapped Hamiltonians: restriction of
approximate symmetries to a band and certified lower bounds on the band's
degeneracy."""

from .config import DEFAULT_TOL, Tolerances
from .linalg import (
    EigDecomp,
    NormSpec,
    OPERATOR,
    eig_general,
    eig_normal,
    haar_unitary,
    is_normal,
    is_unitary,
    operator_norm,
    polar_unitary,
    right_eigenvector,
    schatten_kyfan_norm,
    spectral_distance,
    twisted_commutator,
)
from .minima import (
    TwistedPair,
    brute_min,
    clock_matrix,
    excluded_dimensions,
    lambda_min,
    lambda_upper_bound,
    optimal_angles,
    optimal_pair,
    permutation_cost,
    round_half_away,
    shift_matrix,
)
from .restriction import (
    BandSpec,
    GroundSymmetry,
    RestrictionResult,
    commutator_epsilon,
    gibbs_transform,
    ground_symmetry,
    offdiag_norm,
    restrict_pair,
    sqrt_defect,
)
from .certify import (
    Arc,
    Certificate,
    DoubleWitnessReport,
    GramCheck,
    OrbitExpectation,
    certify_double,
    certify_lambda_exclusion,
    certify_single,
    eigenvalue_arc,
    gram_independent,
    greedy_transversal,
    minimal_intervals,
    orbit_expectations,
    overlap_bound,
    single_pair_threshold,
    verify_double_witness,
)
from .shared_eig import (
    ClusterResult,
    SharedEigenResult,
    cluster,
    shared_approx_eigenvector,
    shared_approx_eigenvector_normal,
)
from .models import (
    ClockModel,
    ModelSpec,
    TensorDoubleModel,
    clock_model,
    hermitian_perturbation,
    tensor_double_model,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "Tolerances",
    "EigDecomp",
    "NormSpec",
    "OPERATOR",
    "eig_general",
    "eig_normal",
    "haar_unitary",
    "is_normal",
    "is_unitary",
    "operator_norm",
    "polar_unitary",
    "right_eigenvector",
    "schatten_kyfan_norm",
    "spectral_distance",
    "twisted_commutator",
    "TwistedPair",
    "brute_min",
    "clock_matrix",
    "excluded_dimensions",
    "lambda_min",
    "lambda_upper_bound",
    "optimal_angles",
    "optimal_pair",
    "permutation_cost",
    "round_half_away",
    "shift_matrix",
    "BandSpec",
    "GroundSymmetry",
    "RestrictionResult",
    "commutator_epsilon",
    "gibbs_transform",
    "ground_symmetry",
    "offdiag_norm",
    "restrict_pair",
    "sqrt_defect",
    "Arc",
    "Certificate",
    "DoubleWitnessReport",
    "GramCheck",
    "OrbitExpectation",
    "certify_double",
    "certify_lambda_exclusion",
    "certify_single",
    "eigenvalue_arc",
    "gram_independent",
    "greedy_transversal",
    "minimal_intervals",
    "orbit_expectations",
    "overlap_bound",
    "single_pair_threshold",
    "verify_double_witness",
    "ClusterResult",
    "SharedEigenResult",
    "cluster",
    "shared_approx_eigenvector",
    "shared_approx_eigenvector_normal",
    "ClockModel",
    "ModelSpec",
    "TensorDoubleModel",
    "clock_model",
    "hermitian_perturbation",
    "tensor_double_model",
]
