"""Degree-p monomial lifts of vectors and of linear flows.

The lift of ``x`` collects all degree-p monomials in lexicographically
descending exponent order, scaled by square roots of multinomial
coefficients so that ``norm(lift(x)) == norm(x)**p``.  The lifted matrix of
``A`` is the generator of the lifted flow: if ``dx/dt = A x`` then
``d lift(x)/dt = lift_matrix(A) lift(x)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .linalg import as_matrix

# Degree cap keeps multinomial coefficients well inside exact float range.
MAX_DEGREE_DEFAULT = 6

# Cap on the number of basis monomials.
MAX_TERMS_DEFAULT = 200_000


def lift_dimension(n: int, p: int) -> int:
    """Number of degree-p monomials in n variables, C(n+p-1, p)."""
    return math.comb(n + p - 1, p)


def _compositions(n: int, p: int):
    # Weak compositions of p into n parts, lexicographically descending.
    if n == 1:
        yield (p,)
        return
    for first in range(p, -1, -1):
        for rest in _compositions(n - 1, p - first):
            yield (first,) + rest


@dataclass(frozen=True)
class LiftBasis:
    """Ordered, coefficient-normalized degree-p monomial basis."""

    n: int
    p: int
    multi_indices: tuple[tuple[int, ...], ...]
    coeffs: np.ndarray

    @property
    def size(self) -> int:
        return len(self.multi_indices)

    @cached_property
    def exponents(self) -> np.ndarray:
        """(size, n) integer exponent array, one row per monomial."""
        return np.array(self.multi_indices, dtype=np.int64)

    @cached_property
    def _positions(self) -> dict[tuple[int, ...], int]:
        return {k: i for i, k in enumerate(self.multi_indices)}


def make_basis(
    n: int,
    p: int,
    max_degree: int = MAX_DEGREE_DEFAULT,
    max_terms: int = MAX_TERMS_DEFAULT,
) -> LiftBasis:
    """Build the degree-p lift basis for n state variables."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if p > max_degree:
        raise ValueError(f"lift degree p={p} exceeds cap {max_degree}")
    n_p = lift_dimension(n, p)
    if n_p > max_terms:
        raise ValueError(f"basis size {n_p} exceeds cap {max_terms}")
    indices = tuple(_compositions(n, p))
    fact_p = math.factorial(p)
    coeffs = np.array(
        [math.sqrt(fact_p // math.prod(math.factorial(ki) for ki in k)) for k in indices]
    )
    return LiftBasis(n=n, p=p, multi_indices=indices, coeffs=coeffs)


def lift_vector(basis: LiftBasis, x) -> np.ndarray:
    """Evaluate the lifted vector; satisfies norm(out) = norm(x)**p."""
    x = np.asarray(x, dtype=float)
    if x.shape != (basis.n,):
        raise ValueError(f"x must have shape ({basis.n},), got {x.shape}")
    return basis.coeffs * np.prod(x[None, :] ** basis.exponents, axis=1)


def lift_matrix(basis: LiftBasis, a) -> np.ndarray:
    """Generator of the lifted flow induced by ``dx/dt = a x``.

    Built combinatorially from the product rule: differentiating the
    monomial with exponents ``u`` moves one power from slot i to slot j
    with weight ``a[i, j] * u[i]``, rescaled by the coefficient ratio of
    the two basis monomials.  The construction is exact (no numerical
    differentiation) and linear in ``a``.
    """
    a = as_matrix(a, "a", square=True)
    if a.shape[0] != basis.n:
        raise ValueError(f"a must be {basis.n}x{basis.n}, got {a.shape}")
    size = basis.size
    coeffs = basis.coeffs
    pos = basis._positions
    out = np.zeros((size, size), dtype=a.dtype)
    for row, u in enumerate(basis.multi_indices):
        cu = coeffs[row]
        for i, ui in enumerate(u):
            if ui == 0:
                continue
            for j in range(basis.n):
                v = list(u)
                v[i] -= 1
                v[j] += 1
                col = pos[tuple(v)]
                out[row, col] += a[i, j] * ui * cu / coeffs[col]
    return out
