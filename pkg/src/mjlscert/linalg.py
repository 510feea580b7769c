"""Dense matrix kernels: Kronecker algebra, matrix exponential, spectra.

Everything in here is a thin, validated layer over numpy/scipy LAPACK
routines.  The one piece of added numerics is the defective-cluster
refinement in :func:`spectral_abscissa`: when every eigenvalue in the
rightmost cluster is ill conditioned (tiny ``|y^H x|``), the raw eigenvalues
carry an O(sqrt(eps)) splitting error, while their mean is accurate to
O(eps) because the cluster trace is.  The refined value is therefore the
better estimate of the true maximum real part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

# Hurwitz decision margin shared across the package.
EPS_DEFAULT = 1e-9

# |y^H x| below this marks an eigenpair as numerically degenerate.
DEGENERATE_PAIR_TOL = 1e-10

# Eigenvalue condition below this marks a cluster member as defective-like.
_ILL_CONDITIONED_TOL = 1e-4


def as_matrix(a, name: str = "matrix", square: bool = False) -> np.ndarray:
    """Coerce ``a`` to a validated 2-D float/complex ndarray.

    Rejects empty, non-numeric, non-finite and (optionally) non-square
    input with a message naming the offending argument.
    """
    m = np.asarray(a)
    if m.dtype == object or not np.issubdtype(m.dtype, np.number):
        raise ValueError(f"{name} must be numeric")
    m = m.astype(complex) if np.iscomplexobj(m) else m.astype(float)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"{name} must be non-empty, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    if square and m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product of two matrices."""
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def kron_sum(a, b) -> np.ndarray:
    """Kronecker sum ``a (+) b = a x I_m + I_n x b`` of square matrices."""
    a = as_matrix(a, "a", square=True)
    b = as_matrix(b, "b", square=True)
    return np.kron(a, np.eye(b.shape[0])) + np.kron(np.eye(a.shape[0]), b)


def block_diag(blocks) -> np.ndarray:
    """Block-diagonal assembly of a non-empty sequence of square matrices."""
    blocks = [as_matrix(blk, f"blocks[{i}]", square=True) for i, blk in enumerate(blocks)]
    if not blocks:
        raise ValueError("blocks must be a non-empty sequence")
    return scipy.linalg.block_diag(*blocks)


def expm(a) -> np.ndarray:
    """Matrix exponential (scaling-and-squaring with Pade approximant)."""
    return scipy.linalg.expm(as_matrix(a, "a", square=True))


@dataclass(frozen=True)
class EigenPair:
    """Matched left/right eigenpair with unit-norm vectors."""

    value: complex
    right_vector: np.ndarray
    left_vector: np.ndarray


@dataclass(frozen=True)
class SpectralAbscissa:
    """Maximum real part of the spectrum plus all nearly-achieving pairs.

    ``achieving_pairs`` is sorted by descending real part, then ascending
    ``|Im|``; the first entry is the dominant eigenpair.
    """

    mu: float
    achieving_pairs: tuple[EigenPair, ...]

    @property
    def dominant(self) -> EigenPair:
        return self.achieving_pairs[0]


def _eig_lr(a: np.ndarray):
    """Eigendecomposition with matched left and right vectors.

    scipy returns unit-norm columns with ``vl[:,k]^H a = w[k] vl[:,k]^H``
    and ``a vr[:,k] = w[k] vr[:,k]``.
    """
    try:
        w, vl, vr = scipy.linalg.eig(a, left=True, right=True)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise ArithmeticError(f"eigensolver failed: {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise ArithmeticError("eigensolver returned non-finite eigenvalues")
    return w, vl, vr


def _refined_mu(w, vl, vr, cluster_tol):
    """Cluster indices near the raw maximum real part and the refined mu."""
    mu_raw = float(w.real.max())
    tol = cluster_tol if cluster_tol is not None else 1e-6 * max(1.0, abs(mu_raw))
    if tol < 0:
        raise ValueError("cluster_tol must be nonnegative")
    cluster = np.flatnonzero(w.real >= mu_raw - tol)
    conds = np.abs([np.vdot(vl[:, k], vr[:, k]) for k in cluster])
    mu = mu_raw
    if len(cluster) >= 2 and np.all(conds < _ILL_CONDITIONED_TOL):
        # Defective rightmost cluster: individual eigenvalues split by
        # ~sqrt(eps) but their mean tracks the cluster trace to ~eps.
        mu = float(w.real[cluster].mean())
    return mu, cluster, conds


def _lone_rightmost_entity(w, cluster) -> bool:
    """True when the rightmost cluster is one simple eigenvalue or one
    simple complex-conjugate pair.

    At such points the abscissa is differentiable along any real matrix
    perturbation; a cluster of two equal real eigenvalues or of several
    distinct groups marks a genuine coalescence instead.
    """
    if len(cluster) == 1:
        return True
    if len(cluster) == 2:
        a, b = complex(w[cluster[0]]), complex(w[cluster[1]])
        scale = max(1.0, abs(a))
        return abs(a - b.conjugate()) <= 1e-9 * scale and abs(a.imag) > 1e-9 * scale
    return False


def spectral_abscissa(a, cluster_tol: float | None = None) -> SpectralAbscissa:
    """Spectral abscissa of ``a`` with every nearly-rightmost eigenpair.

    ``cluster_tol`` defaults to ``1e-6 * max(1, |mu|)``; all eigenpairs with
    real part within that tolerance of the maximum are returned so callers
    can see coalescing eigenvalues (where the abscissa is nonsmooth).
    """
    a = as_matrix(a, "a", square=True)
    w, vl, vr = _eig_lr(a)
    mu, cluster, _ = _refined_mu(w, vl, vr, cluster_tol)
    order = sorted(cluster, key=lambda k: (-w.real[k], abs(w.imag[k]), w.imag[k]))
    pairs = tuple(
        EigenPair(value=complex(w[k]), right_vector=vr[:, k].copy(), left_vector=vl[:, k].copy())
        for k in order
    )
    return SpectralAbscissa(mu=mu, achieving_pairs=pairs)


def is_hurwitz(a, eps: float = EPS_DEFAULT) -> bool:
    """True iff the spectral abscissa is below ``-eps``."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return spectral_abscissa(a).mu < -eps
