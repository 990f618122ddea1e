"""contactgeo: chart-based numerical verification of almost contact metric
structures, almost Hermitian structures and contact-complex Riemannian
submersions."""

__version__ = "0.1.0"

from .expr import ScalarFieldExpr, eval_jet, free_variables, parse
from .jets import (
    Jet2,
    JetArray,
    JetMatrix,
    jet_binary,
    jet_gram_schmidt,
    jet_solve_linear,
    jet_unary,
)
from .manifold import (
    ChartManifold,
    CovectorField,
    EndoField,
    PointSample,
    TwoFormField,
    VectorField,
    eval_field,
    lie_bracket,
    orthonormal_frame,
    sample_points,
)
from .riemann import (
    christoffel,
    codifferential,
    covariant_derivative,
    exterior_derivative,
    nijenhuis,
)
from .structures import (
    AcmStructure,
    AhStructure,
    fundamental_form,
    lee_form_acm,
    lee_form_ah,
)
from .classify import CLASS_IDS, ClassReport, applicable_classes, classify, classify_all
from .submersion import (
    SplitAtPoint,
    SubmersionSpec,
    fibre_structure,
    mean_curvature,
    oneill_A,
    oneill_T,
    split,
)
from .identities import (
    VerificationReport,
    identity_ids,
    verify_identities,
    verify_identity,
)
from .catalog import (
    build_c12_model,
    build_conformal_change,
    build_product,
    build_warped,
    catalog,
    catalog_names,
)
from .util import Sampling

__all__ = [
    "AcmStructure",
    "AhStructure",
    "CLASS_IDS",
    "ChartManifold",
    "ClassReport",
    "CovectorField",
    "EndoField",
    "Jet2",
    "JetArray",
    "PointSample",
    "Sampling",
    "ScalarFieldExpr",
    "SplitAtPoint",
    "SubmersionSpec",
    "TwoFormField",
    "VectorField",
    "VerificationReport",
    "applicable_classes",
    "build_c12_model",
    "build_conformal_change",
    "build_product",
    "build_warped",
    "catalog",
    "catalog_names",
    "christoffel",
    "classify",
    "classify_all",
    "codifferential",
    "covariant_derivative",
    "eval_field",
    "eval_jet",
    "JetMatrix",
    "exterior_derivative",
    "fibre_structure",
    "free_variables",
    "fundamental_form",
    "identity_ids",
    "jet_binary",
    "jet_gram_schmidt",
    "jet_solve_linear",
    "jet_unary",
    "lee_form_acm",
    "lee_form_ah",
    "lie_bracket",
    "mean_curvature",
    "nijenhuis",
    "oneill_A",
    "oneill_T",
    "orthonormal_frame",
    "parse",
    "sample_points",
    "split",
    "verify_identities",
    "verify_identity",
]
