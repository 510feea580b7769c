"""Shared fixtures: regression systems and random-instance helpers."""

import numpy as np
import pytest

from mjlscert import JumpSystem, WeightSet


@pytest.fixture
def rotation_system() -> JumpSystem:
    """Two opposite rotations switched by a symmetric rate-1 chain.

    Every trajectory has constant norm, so the system is not pth mean
    stable for any p, yet the unweighted degree-1 certificate is Hurwitz.
    """
    a1 = [[0.0, -1.0], [1.0, 0.0]]
    a2 = [[0.0, 1.0], [-1.0, 0.0]]
    q = [[-1.0, 1.0], [1.0, -1.0]]
    return JumpSystem(modes=[a1, a2], generator=q)


@pytest.fixture
def rotation_cross_weights(rotation_system) -> WeightSet:
    """Each mode weighted by the other mode's (skew) matrix."""
    a1, a2 = rotation_system.modes
    return WeightSet.skew([a2, a1])


@pytest.fixture
def coupled_system() -> JumpSystem:
    """Fast-switching pair with a stable unweighted certificate but a
    weighted certificate that can be pushed past zero at weight order 2."""
    a1 = [[1.1, 1.8], [1.75, -0.5]]
    a2 = [[-1.1, -2.05], [1.95, -0.15]]
    q = [[-10.0, 10.0], [10.0, -10.0]]
    return JumpSystem(modes=[a1, a2], generator=q)


def random_generator(rng: np.random.Generator, num_modes: int, rate_scale: float = 1.5):
    """Random valid generator: nonnegative off-diagonals, zero row sums."""
    q = rng.uniform(0.0, rate_scale, size=(num_modes, num_modes))
    np.fill_diagonal(q, 0.0)
    np.fill_diagonal(q, -q.sum(axis=1))
    return q


def random_system(rng: np.random.Generator, n: int, num_modes: int) -> JumpSystem:
    modes = [rng.standard_normal((n, n)) for _ in range(num_modes)]
    return JumpSystem(modes=modes, generator=random_generator(rng, num_modes))


def random_metzler_system(
    rng: np.random.Generator, n: int, num_modes: int, diag_shift: float = 0.0
) -> JumpSystem:
    """Random positive system; diag_shift < 0 pushes toward stability."""
    modes = []
    for _ in range(num_modes):
        a = rng.uniform(0.0, 1.0, size=(n, n))
        np.fill_diagonal(a, rng.uniform(-1.0, 1.0, size=n) + diag_shift)
        modes.append(a)
    return JumpSystem(modes=modes, generator=random_generator(rng, num_modes))


def random_skew(rng: np.random.Generator, m: int, scale: float = 1.0):
    x = rng.uniform(-scale, scale, size=(m, m))
    return x - x.T


def random_skew_hermitian(rng: np.random.Generator, m: int, scale: float = 1.0):
    x = rng.uniform(-scale, scale, size=(m, m)) + 1j * rng.uniform(-scale, scale, size=(m, m))
    return 0.5 * (x - x.conj().T)
