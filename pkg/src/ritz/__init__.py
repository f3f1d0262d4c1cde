"""Generalized symmetric-definite eigensolver for non-orthogonal basis sets.

Assembles overlap and Hamiltonian matrices exactly over the rationals,
certifies positive definiteness with an exact LDL^T, and solves
H C = S C W at a configurable binary precision along three interchangeable
reduction routes.  Ships a worked model problem (particle on [0, 1] with a
linear potential) with quadrature oracles, reference spectra and a
convergence-study driver.
"""

from .exceptions import (
    DimensionMismatch,
    InsufficientNodes,
    NegativeOperand,
    NoConvergence,
    NotPositiveDefinite,
    PrecisionUnsupported,
    RitzError,
    SingularOverlap,
    StateCountMismatch,
    UnsupportedLambda,
    ZeroNorm,
    ZeroPivot,
)
from .scalars import (
    DEFAULT_PRECISION,
    MAX_PI_PRECISION,
    MIN_PRECISION,
    PFloat,
    Rational,
    as_rational,
    default_tolerance,
    pi_const,
    precision,
    sqrt_pf,
    to_float,
)
from .matrix import (
    LdltFactors,
    float_matrix,
    gram_determinant,
    identity_float,
    invert_unit_lower,
    is_positive_definite,
    is_symmetric,
    ldlt,
    matmul,
    matvec,
    rational_matrix,
    sym_from_upper,
    transpose_conjugate,
)
from .eigen import (
    ResidualDiagnostics,
    RitzSolution,
    Route,
    Spectrum,
    jacobi_eigensym,
    matrix_inv_sqrt,
    matrix_sqrt,
    normalize_s,
    residuals,
    solve_generalized,
    unitarity_check,
)
from .model import (
    BASIS_FAMILY,
    ProblemSpec,
    ReferenceSpectrum,
    basis_coefficients,
    build_matrices,
    exact_reference,
    gauss_legendre_unit,
    hamiltonian_element,
    overlap_element,
    polynomial_derivative,
    polynomial_value,
    quadrature_hamiltonian_element,
    quadrature_overlap_element,
)
from .study import (
    ConvergenceReport,
    GapTable,
    MonotonicityViolation,
    check_monotone,
    compare_to_reference,
    format_scientific,
    format_significant,
    report_json_dict,
    run_convergence,
    stable_precision,
    to_csv,
    to_text,
)

__version__ = "0.1.0"
