"""Instability certificates for continuous-time Markov jump linear systems.

Build Kronecker-lifted certificate matrices, search skew-symmetric matrix
weights that push the certificate's spectral abscissa nonnegative (which
certifies that the system is not exponentially pth mean stable), and
cross-validate with an exact jump-process Monte Carlo simulator.
"""

from .linalg import (
    EPS_DEFAULT,
    EigenPair,
    SpectralAbscissa,
    block_diag,
    expm,
    is_hurwitz,
    kron,
    kron_sum,
    spectral_abscissa,
)
from .lifting import LiftBasis, lift_dimension, lift_matrix, lift_vector, make_basis
from .model import (
    JumpSystem,
    StabilityVerdict,
    VerdictKind,
    is_positive_system,
    require_valid,
    validate,
)
from .certificates import (
    CertificateKind,
    CertificateReport,
    CertificateTooLargeError,
    WeightAdmissibility,
    WeightSet,
    certificate_order,
    certificate_report,
    complex_weighted_certificate,
    embed_complex_weights,
    instability_verdict,
    lifted_certificate,
    mean_square_certificate,
    mean_square_verdict,
    pad_weights,
    weighted_certificate,
)
from .weightopt import (
    AffineFamily,
    OptimizerConfig,
    OptimResult,
    SkewParams,
    build_affine_family,
    certify_via_optimization,
    mu_and_gradient,
    optimize_skew_weights,
    params_to_weights,
    sweep_weight_orders,
    weights_to_params,
)
from .montecarlo import (
    JumpCapExceededError,
    SimConfig,
    TrajectoryStats,
    empirical_instability_check,
    moment_ode_reference,
    simulate,
)
from .config import ConfigError, RunConfig, parse_config, parse_config_dict
from .report import Report

__version__ = "0.1.0"

__all__ = [
    "EPS_DEFAULT",
    "EigenPair",
    "SpectralAbscissa",
    "block_diag",
    "expm",
    "is_hurwitz",
    "kron",
    "kron_sum",
    "spectral_abscissa",
    "LiftBasis",
    "lift_dimension",
    "lift_matrix",
    "lift_vector",
    "make_basis",
    "JumpSystem",
    "StabilityVerdict",
    "VerdictKind",
    "is_positive_system",
    "require_valid",
    "validate",
    "CertificateKind",
    "CertificateReport",
    "CertificateTooLargeError",
    "WeightAdmissibility",
    "WeightSet",
    "certificate_order",
    "certificate_report",
    "complex_weighted_certificate",
    "embed_complex_weights",
    "instability_verdict",
    "lifted_certificate",
    "mean_square_certificate",
    "mean_square_verdict",
    "pad_weights",
    "weighted_certificate",
    "AffineFamily",
    "OptimizerConfig",
    "OptimResult",
    "SkewParams",
    "build_affine_family",
    "certify_via_optimization",
    "mu_and_gradient",
    "optimize_skew_weights",
    "params_to_weights",
    "sweep_weight_orders",
    "weights_to_params",
    "JumpCapExceededError",
    "SimConfig",
    "TrajectoryStats",
    "empirical_instability_check",
    "moment_ode_reference",
    "simulate",
    "ConfigError",
    "RunConfig",
    "parse_config",
    "parse_config_dict",
    "Report",
]
