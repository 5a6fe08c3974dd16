"""Certificates of nonnegativity for sparse polynomials via sums of
nonnegative circuit polynomials (SONC): circuit catalogs with exact
barycentric data, entropy and exponential-cone kernels, dual-cone
membership, and certified lower bounds for unconstrained optimization.
"""

from .bounds import (
    BoundResult,
    CertificatePiece,
    DualSolveError,
    SoncCertificate,
    Status,
    certify_optimality,
    dual_program_solve,
    recover_optimizer,
    sonc_feasibility,
    sonc_lower_bound,
    verify_certificate,
)
from .circuits import (
    AffinelyDependentError,
    Circuit,
    CircuitCatalog,
    SupportTooLargeError,
    affinely_independent,
    barycentric_coordinates,
    circuit_number,
    enumerate_circuits,
    is_even_point,
)
from .dual import (
    DualWitness,
    MembershipReport,
    circuit_dual_membership,
    circuit_row_infeasibility,
    lp_min_infeasibility,
    psd_dual_quartic,
    quartic_dual_membership,
    sage_dual_membership,
    sonc_dual_membership,
)
from .entropy import (
    ConePoint3,
    entropy_iff_expcone,
    entropy_minimizer,
    exp_cone_dual_member,
    exp_cone_member,
    relative_entropy,
    scalar_dual_member,
    xlogx_over,
)
from .nonneg import (
    CircuitPolynomial,
    EntropyWitness,
    as_sparse_polynomial,
    is_nonneg_circuit,
    is_nonneg_on_positive_orthant,
    verify_entropy_witness,
)
from .polynomials import (
    DualVector,
    Exponent,
    ParseError,
    SparsePolynomial,
    SupportSet,
    evaluate,
    moment_vector,
    parse_polynomial,
    serialize_polynomial,
)

__version__ = "0.1.0"

__all__ = [
    "AffinelyDependentError",
    "BoundResult",
    "CertificatePiece",
    "Circuit",
    "CircuitCatalog",
    "CircuitPolynomial",
    "ConePoint3",
    "DualSolveError",
    "DualVector",
    "DualWitness",
    "EntropyWitness",
    "Exponent",
    "MembershipReport",
    "ParseError",
    "SoncCertificate",
    "SparsePolynomial",
    "Status",
    "SupportSet",
    "SupportTooLargeError",
    "affinely_independent",
    "as_sparse_polynomial",
    "barycentric_coordinates",
    "certify_optimality",
    "circuit_dual_membership",
    "circuit_number",
    "circuit_row_infeasibility",
    "dual_program_solve",
    "entropy_iff_expcone",
    "entropy_minimizer",
    "enumerate_circuits",
    "evaluate",
    "exp_cone_dual_member",
    "exp_cone_member",
    "is_even_point",
    "is_nonneg_circuit",
    "is_nonneg_on_positive_orthant",
    "lp_min_infeasibility",
    "moment_vector",
    "parse_polynomial",
    "psd_dual_quartic",
    "quartic_dual_membership",
    "recover_optimizer",
    "relative_entropy",
    "sage_dual_membership",
    "scalar_dual_member",
    "serialize_polynomial",
    "sonc_dual_membership",
    "sonc_feasibility",
    "sonc_lower_bound",
    "verify_certificate",
    "verify_entropy_witness",
    "xlogx_over",
]
