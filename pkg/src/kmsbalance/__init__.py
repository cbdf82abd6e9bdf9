"""Detailed balance conditions for finite-dimensional quantum Markov semigroups.

Decides KMS-symmetry, standard quantum detailed balance (SQDB) and its
time-reversed variant (SQDB-theta) for GKSL generators, from special
representations, and cross-checks against semigroup-level trace identities.
"""
from .balance import (
    CheckReport,
    check_kms_symmetric,
    check_sqdb,
    check_sqdb_theta,
    cov_matrices,
    equal_variance_property,
    pairing_identity_defect,
    semigroup_oracle,
    theta_rho_compatibility,
)
from .duality import DualPair, dual_generator, reconstruct_G_adjoint, theta_dual, verify_dual_relation
from .exceptions import (
    CaseConstraintViolated,
    ConstraintViolated,
    InvalidGenerator,
    InvalidTimeReversal,
    KmsBalanceError,
    NoInvariantState,
    NotFaithful,
    NotHermitian,
    NotInvariant,
    NotPositive,
    NotSpecial,
    NumericalFailure,
    ShapeMismatch,
    Singular,
    ThetaRhoNoncommuting,
)
from .gksl import (
    HEISENBERG,
    SCHRODINGER,
    DensityMatrix,
    GkslGenerator,
    Superoperator,
    TimeReversal,
    apply_generator,
    apply_predual,
    evolve,
    is_kms_symmetric_oracle,
    kms_gram,
    semigroup_matrix,
    to_superoperator,
)
from .gram import GramTriple, gram_triple
from .invariant import find_invariant_state, is_invariant, verify_invariance
from .linalg import DEFAULT_TOL, Tolerances
from .qubit import QubitParams, build_qdb_theta_form, build_standard_form, map_qdb_to_sqdb_params, sample_params
from .special import is_special, make_special, normalize, representation_equivalent, superoperator_distance

__version__ = "0.1.0"

__all__ = [
    "CaseConstraintViolated",
    "CheckReport",
    "ConstraintViolated",
    "DEFAULT_TOL",
    "DensityMatrix",
    "DualPair",
    "GkslGenerator",
    "GramTriple",
    "HEISENBERG",
    "InvalidGenerator",
    "InvalidTimeReversal",
    "KmsBalanceError",
    "NoInvariantState",
    "NotFaithful",
    "NotHermitian",
    "NotInvariant",
    "NotPositive",
    "NotSpecial",
    "NumericalFailure",
    "QubitParams",
    "SCHRODINGER",
    "ShapeMismatch",
    "Singular",
    "Superoperator",
    "ThetaRhoNoncommuting",
    "TimeReversal",
    "Tolerances",
    "apply_generator",
    "apply_predual",
    "build_qdb_theta_form",
    "build_standard_form",
    "check_kms_symmetric",
    "check_sqdb",
    "check_sqdb_theta",
    "cov_matrices",
    "dual_generator",
    "equal_variance_property",
    "evolve",
    "find_invariant_state",
    "gram_triple",
    "is_invariant",
    "is_kms_symmetric_oracle",
    "is_special",
    "kms_gram",
    "make_special",
    "map_qdb_to_sqdb_params",
    "normalize",
    "pairing_identity_defect",
    "reconstruct_G_adjoint",
    "representation_equivalent",
    "sample_params",
    "semigroup_matrix",
    "semigroup_oracle",
    "superoperator_distance",
    "theta_dual",
    "theta_rho_compatibility",
    "to_superoperator",
    "verify_dual_relation",
    "verify_invariance",
]
