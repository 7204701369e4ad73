"""q-Heun equation and its variants.

Construction of the three degenerate one-variable Ruijsenaars-van Diejen
operators as q-difference equations, local analysis at the regular
singularities 0 and infinity (characteristic exponents, Frobenius-type
series, apparency of resonances), the characterization of the A3/A2
variants by local data, quasi-exact solvability (invariant monomial
subspaces and exact eigenpairs), the q-hypergeometric reduction, and
numerical verification of the q -> 1 degeneration to Heun's differential
equation.
"""

__version__ = "0.1.0"

from .errors import (
    ClosureViolation,
    CoincidentSingularities,
    ConvergenceFailure,
    DegenerateBeta,
    ExponentMismatch,
    InvalidParams,
    IrregularPoint,
    NonRealExponent,
    NotReducible,
    ParseError,
    PochhammerPole,
    QHeunError,
    ResonantLogarithmic,
)
from .laurent import LaurentPoly
from .params import Family, ModelParams, VariantSkeleton
from .operator import (
    QDiffEquation,
    apply_equation,
    apply_equation_offset,
    build_equation,
    d_coefficients,
    gauge_transform,
    q_hypergeometric_series,
    q_pochhammer,
    reduce_to_q_hypergeometric,
    scale_argument,
    standard_q_hypergeometric_equation,
)
from .local import (
    BasePoint,
    ExpansionStatus,
    ExponentPair,
    LocalExpansion,
    SingularityReport,
    apparency,
    apparency_residual,
    classify,
    exponents,
    frobenius_series,
    residual_profile,
    residual_profile_relative,
    singularity_report,
)
from .characterize import (
    CharacterizationReport,
    DerivedA2,
    DerivedA3,
    assemble_equation,
    derive_b_A2,
    derive_b_A3,
    verify_characterization,
)
from .qes import (
    EigenPair,
    InvariantSubspace,
    eigenpairs,
    find_subspaces,
    operator_matrix,
    solve_subspace,
)
from .degeneration import (
    FuchsianODE,
    HeunForm,
    LimitFamily,
    LimitReport,
    indicial_exponents,
    limit_ode,
    ode_frobenius,
    to_heun_form,
    verify_limit,
)

__all__ = [
    "__version__",
    # errors
    "QHeunError", "InvalidParams", "ParseError", "DegenerateBeta", "NotReducible",
    "PochhammerPole", "IrregularPoint", "NonRealExponent", "ExponentMismatch",
    "ClosureViolation", "ConvergenceFailure", "CoincidentSingularities",
    "ResonantLogarithmic",
    # core types
    "LaurentPoly", "Family", "ModelParams", "VariantSkeleton", "QDiffEquation",
    # operator
    "build_equation", "d_coefficients", "apply_equation", "apply_equation_offset",
    "gauge_transform", "scale_argument", "reduce_to_q_hypergeometric",
    "standard_q_hypergeometric_equation", "q_pochhammer", "q_hypergeometric_series",
    # local
    "BasePoint", "ExponentPair", "ExpansionStatus", "LocalExpansion",
    "SingularityReport", "classify", "exponents", "frobenius_series", "apparency",
    "apparency_residual", "residual_profile", "residual_profile_relative",
    "singularity_report",
    # characterize
    "DerivedA3", "DerivedA2", "derive_b_A3", "derive_b_A2", "assemble_equation",
    "CharacterizationReport", "verify_characterization",
    # qes
    "InvariantSubspace", "EigenPair", "find_subspaces", "operator_matrix",
    "eigenpairs", "solve_subspace",
    # degeneration
    "LimitFamily", "FuchsianODE", "HeunForm", "limit_ode", "indicial_exponents",
    "ode_frobenius", "to_heun_form", "verify_limit", "LimitReport",
]
