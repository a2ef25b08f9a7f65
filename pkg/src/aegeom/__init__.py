"""Numerical tensor calculus for metric manifolds with a square-root-of-
plus-or-minus-identity structure tensor.

The package evaluates charted metric/structure pairs with forward-mode
derivatives, builds the Levi-Civita and canonical connections, classifies
structures by the residuals of the standard conditions, and machine-checks
the implications between them, backed by exact pointwise linear algebra.
"""

from .algebra import (
    ModelFiber,
    SubspaceQuery,
    alternating_definitions_coincide,
    build_constraints,
    dimension_table,
    subspace_dimension,
)
from .catalog import catalog, standard_names
from .classify import (
    CheckResult,
    ClassificationReport,
    classify,
    condition_table,
    sample_residuals,
    theorem_suite,
    verify_codazzi_implies_kahler,
    verify_nearly_implies_kahler,
    verify_nearly_torsion_characterization,
    verify_torsion_characterizations,
)
from .connection import (
    ConnectionCoefficients,
    DerivedTensors,
    canonical_connection,
    canonical_torsion,
    christoffel,
    codazzi_coupled_residuals,
    derived_tensors,
    identity_residuals,
    nabla_j,
    nijenhuis,
)
from .dual import Dual, gradient
from .errors import (
    ConfigError,
    DegenerateConstruction,
    DegenerateSystem,
    DimensionOracleMismatch,
    DomainEmpty,
    ExpressionError,
    GeometryError,
    InternalConsistencyError,
    KindMismatch,
    NearSingularMetric,
    PointOutsideDomain,
    SlotMismatch,
    TheoremViolation,
    UnknownCatalogName,
    UnsupportedDimension,
)
from .linalg import (
    LinearConstraintSystem,
    exact_nullity,
    null_space,
    solve_metric,
)
from .manifold import (
    HERMITIAN,
    KINDS,
    NORDEN,
    PARA_HERMITIAN,
    PRODUCT_RIEMANNIAN,
    Box,
    ChartedManifold,
    SamplePlan,
    StructureKind,
    ValidationReport,
    eval_with_derivatives,
    evaluate_fields,
    load_manifold_config,
    validate_structure,
)
from .tensors import LOWER, UPPER, TensorValue, contract

__version__ = "0.1.0"

__all__ = [
    "Box",
    "ChartedManifold",
    "CheckResult",
    "ClassificationReport",
    "ConfigError",
    "ConnectionCoefficients",
    "DegenerateConstruction",
    "DegenerateSystem",
    "DerivedTensors",
    "DimensionOracleMismatch",
    "DomainEmpty",
    "Dual",
    "ExpressionError",
    "GeometryError",
    "HERMITIAN",
    "InternalConsistencyError",
    "KINDS",
    "KindMismatch",
    "LOWER",
    "LinearConstraintSystem",
    "ModelFiber",
    "NORDEN",
    "NearSingularMetric",
    "PARA_HERMITIAN",
    "PRODUCT_RIEMANNIAN",
    "PointOutsideDomain",
    "SamplePlan",
    "SlotMismatch",
    "StructureKind",
    "SubspaceQuery",
    "TensorValue",
    "TheoremViolation",
    "UPPER",
    "UnknownCatalogName",
    "UnsupportedDimension",
    "ValidationReport",
    "alternating_definitions_coincide",
    "build_constraints",
    "canonical_connection",
    "canonical_torsion",
    "catalog",
    "christoffel",
    "classify",
    "codazzi_coupled_residuals",
    "condition_table",
    "contract",
    "derived_tensors",
    "dimension_table",
    "eval_with_derivatives",
    "evaluate_fields",
    "exact_nullity",
    "gradient",
    "identity_residuals",
    "load_manifold_config",
    "nabla_j",
    "nijenhuis",
    "null_space",
    "sample_residuals",
    "solve_metric",
    "standard_names",
    "subspace_dimension",
    "theorem_suite",
    "validate_structure",
    "verify_codazzi_implies_kahler",
    "verify_nearly_implies_kahler",
    "verify_nearly_torsion_characterization",
    "verify_torsion_characterizations",
]
