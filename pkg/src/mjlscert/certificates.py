"""Certificate matrices deciding mean stability of jump linear systems.

Three constructions share one shape: a generator coupling term plus a
block diagonal of per-mode flow generators.

* mean-square certificate: blocks ``A_i (+) A_i`` (order N*n^2);
  Hurwitz iff the system is exponentially mean square stable.
* lifted certificate: blocks ``lift_matrix(A_i)`` at degree p (order
  N*n_p); non-Hurwitz implies the system is not exponentially pth mean
  stable, and for positive systems Hurwitz is equivalent to stability.
* weighted certificate: blocks ``lift_matrix(W_i (+) A_i)`` for matrix
  weights W_i whose own switched system is stable (skew-symmetric weights
  qualify since their exponentials are orthogonal); non-Hurwitz implies
  instability, and enlarging the weight order never weakens the test.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .lifting import lift_dimension, lift_matrix, make_basis
from .linalg import EPS_DEFAULT, as_matrix, block_diag, kron_sum, spectral_abscissa
from .model import JumpSystem, StabilityVerdict, VerdictKind, is_positive_system, require_valid

# Refuse certificates larger than this order instead of silently thrashing.
ORDER_CAP_DEFAULT = 4000

# Entrywise tolerance for the skew-symmetry check W + W^T = 0.
SKEW_TOL = 1e-12


class CertificateTooLargeError(ValueError):
    """Raised when a requested certificate exceeds the order cap."""

    def __init__(self, order: int, cap: int):
        super().__init__(f"certificate order {order} exceeds cap {cap}")
        self.order = order
        self.cap = cap


def _check_order(order: int, cap: int) -> int:
    if order > cap:
        raise CertificateTooLargeError(order, cap)
    return order


def certificate_order(n: int, num_modes: int, p: int, m: int = 1) -> int:
    """Order of the weighted certificate: N * C(n*m + p - 1, p)."""
    return num_modes * lift_dimension(n * m, p)


class WeightAdmissibility(Enum):
    SKEW_SYMMETRIC = "skew_symmetric"
    IDENTITY = "identity"
    USER_ASSERTED = "user_asserted"


@dataclass(frozen=True)
class WeightSet:
    """Common-order matrix weights W_1..W_N with an admissibility tag.

    ``SKEW_SYMMETRIC`` weights are checked entrywise; ``IDENTITY`` is the
    trivial order-1 zero weight set (reproducing the unweighted
    certificate); ``USER_ASSERTED`` weights are accepted untested and taint
    any instability verdict with a conditional flag.
    """

    weights: tuple[np.ndarray, ...]
    admissibility: WeightAdmissibility

    def __init__(self, weights, admissibility: WeightAdmissibility):
        ws = tuple(as_matrix(w, f"weights[{i}]", square=True) for i, w in enumerate(weights))
        if not ws:
            raise ValueError("weights must be a non-empty sequence")
        m = ws[0].shape[0]
        for i, w in enumerate(ws):
            if w.shape[0] != m:
                raise ValueError(f"weights[{i}] has order {w.shape[0]}, expected {m}")
            if np.iscomplexobj(w):
                raise ValueError(f"weights[{i}] must be real")
        if admissibility is WeightAdmissibility.SKEW_SYMMETRIC:
            for i, w in enumerate(ws):
                dev = float(np.abs(w + w.T).max())
                if dev > SKEW_TOL:
                    raise ValueError(f"weights[{i}] is not skew-symmetric (|W+W^T|={dev:.3e})")
        elif admissibility is WeightAdmissibility.IDENTITY:
            if m != 1 or any(w[0, 0] != 0.0 for w in ws):
                raise ValueError("identity admissibility requires order-1 zero weights")
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "admissibility", admissibility)

    @classmethod
    def trivial(cls, num_modes: int) -> "WeightSet":
        """The order-1 zero weight set (unweighted certificate)."""
        return cls([np.zeros((1, 1))] * num_modes, WeightAdmissibility.IDENTITY)

    @classmethod
    def skew(cls, weights) -> "WeightSet":
        return cls(weights, WeightAdmissibility.SKEW_SYMMETRIC)

    @property
    def m(self) -> int:
        return self.weights[0].shape[0]

    @property
    def num_modes(self) -> int:
        return len(self.weights)

    @property
    def is_trivial(self) -> bool:
        return self.m == 1 and all(w[0, 0] == 0.0 for w in self.weights)


class CertificateKind(Enum):
    MEAN_SQUARE = "mean_square"
    UNWEIGHTED = "unweighted"
    WEIGHTED = "weighted"


@dataclass(frozen=True)
class CertificateReport:
    """Spectral summary and Hurwitz classification of one certificate."""

    certificate_kind: CertificateKind
    p: int
    mu: float
    dominant_eigenvalue: complex
    hurwitz: bool
    order: int
    eps: float = EPS_DEFAULT
    weight_set: WeightSet | None = None


def mean_square_certificate(system: JumpSystem, order_cap: int = ORDER_CAP_DEFAULT) -> np.ndarray:
    """Mean-square stability certificate Q^T x I + diag(A_i (+) A_i)."""
    require_valid(system)
    n = system.dim
    _check_order(system.num_modes * n * n, order_cap)
    blocks = [kron_sum(a, a) for a in system.modes]
    return np.kron(system.generator.T, np.eye(n * n)) + block_diag(blocks)


def lifted_certificate(
    system: JumpSystem, p: int, order_cap: int = ORDER_CAP_DEFAULT
) -> np.ndarray:
    """Degree-p certificate Q^T x I + diag(lift_matrix(A_i))."""
    require_valid(system)
    _check_order(certificate_order(system.dim, system.num_modes, p), order_cap)
    basis = make_basis(system.dim, p)
    blocks = [lift_matrix(basis, a) for a in system.modes]
    return np.kron(system.generator.T, np.eye(basis.size)) + block_diag(blocks)


def weighted_certificate(
    system: JumpSystem,
    p: int,
    weights: WeightSet,
    order_cap: int = ORDER_CAP_DEFAULT,
) -> np.ndarray:
    """Weighted degree-p certificate Q^T x I + diag(lift_matrix(W_i (+) A_i))."""
    require_valid(system)
    if weights.num_modes != system.num_modes:
        raise ValueError(
            f"weight count {weights.num_modes} does not match mode count {system.num_modes}"
        )
    _check_order(certificate_order(system.dim, system.num_modes, p, weights.m), order_cap)
    basis = make_basis(system.dim * weights.m, p)
    blocks = [lift_matrix(basis, kron_sum(w, a)) for w, a in zip(weights.weights, system.modes)]
    return np.kron(system.generator.T, np.eye(basis.size)) + block_diag(blocks)


def complex_weighted_certificate(
    system: JumpSystem,
    complex_weights,
    order_cap: int = ORDER_CAP_DEFAULT,
) -> np.ndarray:
    """Degree-1 certificate built from complex matrix weights V_i.

    Exists to compare against :func:`embed_complex_weights`: the real
    embedding's abscissa always dominates this matrix's abscissa, so
    complex weights add no certification power.
    """
    require_valid(system)
    vs = [np.asarray(v, dtype=complex) for v in complex_weights]
    if len(vs) != system.num_modes:
        raise ValueError(f"weight count {len(vs)} does not match mode count {system.num_modes}")
    m = vs[0].shape[0]
    for i, v in enumerate(vs):
        if v.ndim != 2 or v.shape != (m, m):
            raise ValueError(f"complex_weights[{i}] must be {m}x{m}")
        if not np.all(np.isfinite(v)):
            raise ValueError(f"complex_weights[{i}] has non-finite entries")
    n = system.dim
    _check_order(system.num_modes * m * n, order_cap)
    blocks = [kron_sum(v, a.astype(complex)) for v, a in zip(vs, system.modes)]
    return np.kron(system.generator.T, np.eye(m * n)).astype(complex) + block_diag(blocks)


def pad_weights(weights: WeightSet, m_prime: int) -> WeightSet:
    """Zero-pad every weight to order ``m_prime`` > current order.

    Padding preserves skew-symmetry and never decreases the weighted
    certificate's spectral abscissa (the padded certificate is similar to a
    block diagonal containing the original one).
    """
    if m_prime <= weights.m:
        raise ValueError(f"m_prime must exceed current order {weights.m}, got {m_prime}")
    padded = []
    for w in weights.weights:
        wp = np.zeros((m_prime, m_prime))
        wp[: weights.m, : weights.m] = w
        padded.append(wp)
    if weights.admissibility is WeightAdmissibility.USER_ASSERTED:
        tag = WeightAdmissibility.USER_ASSERTED
    else:
        # Trivial (identity) weights pad to zero matrices, which are skew.
        tag = WeightAdmissibility.SKEW_SYMMETRIC
    return WeightSet(padded, tag)


def embed_complex_weights(complex_weights) -> WeightSet:
    """Realify complex weights V_i into order-2m real weights.

    Uses the block embedding [[Re V, -Im V], [Im V, Re V]]; skew-Hermitian
    inputs yield skew-symmetric output, other inputs carry a user-asserted
    tag.
    """
    vs = [np.asarray(v, dtype=complex) for v in complex_weights]
    if not vs:
        raise ValueError("complex_weights must be a non-empty sequence")
    m = vs[0].shape[0]
    out = []
    all_skew_hermitian = True
    for i, v in enumerate(vs):
        if v.ndim != 2 or v.shape != (m, m):
            raise ValueError(f"complex_weights[{i}] must be {m}x{m}")
        if float(np.abs(v + v.conj().T).max()) > SKEW_TOL:
            all_skew_hermitian = False
        out.append(np.block([[v.real, -v.imag], [v.imag, v.real]]))
    tag = (
        WeightAdmissibility.SKEW_SYMMETRIC
        if all_skew_hermitian
        else WeightAdmissibility.USER_ASSERTED
    )
    return WeightSet(out, tag)


def certificate_report(
    kind: CertificateKind,
    matrix: np.ndarray,
    p: int,
    eps: float = EPS_DEFAULT,
    weight_set: WeightSet | None = None,
) -> CertificateReport:
    """Eigensolve a certificate matrix and classify it."""
    sa = spectral_abscissa(matrix)
    return CertificateReport(
        certificate_kind=kind,
        p=p,
        mu=sa.mu,
        dominant_eigenvalue=sa.dominant.value,
        hurwitz=sa.mu < -eps,
        order=matrix.shape[0],
        eps=eps,
        weight_set=weight_set,
    )


def instability_verdict(
    system: JumpSystem,
    p: int,
    weights: WeightSet,
    eps: float = EPS_DEFAULT,
    order_cap: int = ORDER_CAP_DEFAULT,
) -> StabilityVerdict:
    """Classify the system from the weighted certificate's abscissa.

    A non-Hurwitz certificate proves the system is not exponentially pth
    mean stable.  A Hurwitz certificate proves stability only for positive
    systems probed with trivial weights; otherwise the verdict is
    inconclusive because the weighted test is one-directional.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    matrix = weighted_certificate(system, p, weights, order_cap=order_cap)
    kind = (
        CertificateKind.UNWEIGHTED
        if weights.admissibility is WeightAdmissibility.IDENTITY
        else CertificateKind.WEIGHTED
    )
    report = certificate_report(kind, matrix, p, eps=eps, weight_set=weights)
    if report.mu >= -eps:
        return StabilityVerdict(
            kind=VerdictKind.NOT_PTH_MEAN_STABLE,
            p=p,
            evidence=report,
            conditional_on_asserted_weights=(
                weights.admissibility is WeightAdmissibility.USER_ASSERTED
            ),
        )
    if weights.admissibility is WeightAdmissibility.IDENTITY and is_positive_system(system):
        return StabilityVerdict(kind=VerdictKind.PTH_MEAN_STABLE_CERTIFIED, p=p, evidence=report)
    return StabilityVerdict(kind=VerdictKind.INCONCLUSIVE, p=p, evidence=report)


def mean_square_verdict(
    system: JumpSystem,
    eps: float = EPS_DEFAULT,
    order_cap: int = ORDER_CAP_DEFAULT,
) -> StabilityVerdict:
    """Two-sided mean-square classification (p = 2, any system)."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    matrix = mean_square_certificate(system, order_cap=order_cap)
    report = certificate_report(CertificateKind.MEAN_SQUARE, matrix, p=2, eps=eps)
    kind = VerdictKind.MEAN_SQUARE_STABLE if report.hurwitz else VerdictKind.NOT_PTH_MEAN_STABLE
    return StabilityVerdict(kind=kind, p=2, evidence=report)
