"""Markov jump linear system model and validation.

A jump system is a finite family of mode matrices driven by a
continuous-time Markov chain on the mode index, given by its
infinitesimal generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:  # pragma: no cover
    from .certificates import CertificateReport

# Absolute tolerance on generator row sums (configs are human-authored decimals).
ROW_SUM_TOL = 1e-12


def _to_2d(a, name):
    m = np.asarray(a)
    if m.dtype == object or not np.issubdtype(m.dtype, np.number):
        raise ValueError(f"{name} must be numeric")
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got ndim={m.ndim}")
    return m.astype(float)


@dataclass(frozen=True)
class JumpSystem:
    """Mode matrices A_1..A_N plus the generator Q of the modulating chain.

    Construction only coerces shapes; semantic checks (generator axioms,
    finiteness) are reported by :func:`validate` as data, not exceptions.
    """

    modes: tuple[np.ndarray, ...]
    generator: np.ndarray

    def __init__(self, modes, generator):
        object.__setattr__(
            self, "modes", tuple(_to_2d(a, f"modes[{i}]") for i, a in enumerate(modes))
        )
        object.__setattr__(self, "generator", _to_2d(generator, "generator"))

    @property
    def num_modes(self) -> int:
        return len(self.modes)

    @property
    def dim(self) -> int:
        return self.modes[0].shape[0] if self.modes else 0


def validate(system: JumpSystem) -> list[str]:
    """Return all invariant violations (empty list means the system is valid).

    Total on finite and non-finite numeric input alike; violations carry
    row/column coordinates where they apply.
    """
    problems: list[str] = []
    n_modes = system.num_modes
    if n_modes < 1:
        problems.append("system must have at least one mode")
        return problems

    n = system.modes[0].shape[0]
    for i, a in enumerate(system.modes):
        if a.shape[0] != a.shape[1]:
            problems.append(f"modes[{i}] is not square: shape {a.shape}")
        elif a.shape[0] != n:
            problems.append(f"modes[{i}] has order {a.shape[0]}, expected {n}")
        bad = np.argwhere(~np.isfinite(a))
        for r, c in bad:
            problems.append(f"modes[{i}] entry ({r},{c}) is not finite")

    q = system.generator
    if q.shape != (n_modes, n_modes):
        problems.append(f"generator must be {n_modes}x{n_modes}, got {q.shape}")
        return problems
    for r, c in np.argwhere(~np.isfinite(q)):
        problems.append(f"generator entry ({r},{c}) is not finite")
        return problems

    for r in range(n_modes):
        for c in range(n_modes):
            if r != c and q[r, c] < 0:
                problems.append(f"generator off-diagonal ({r},{c}) is negative: {q[r, c]}")
        row_sum = float(q[r].sum())
        if abs(row_sum) > ROW_SUM_TOL:
            problems.append(f"generator row {r} sums to {row_sum}, expected 0")
    return problems


def require_valid(system: JumpSystem) -> JumpSystem:
    """Raise ValueError listing every violation if the system is invalid."""
    problems = validate(system)
    if problems:
        raise ValueError("invalid jump system: " + "; ".join(problems))
    return system


def is_positive_system(system: JumpSystem) -> bool:
    """True iff every mode matrix is Metzler (nonnegative off-diagonals)."""
    for a in system.modes:
        off = a - np.diag(np.diag(a))
        if np.any(off < 0):
            return False
    return True


class VerdictKind(Enum):
    MEAN_SQUARE_STABLE = "mean_square_stable"
    PTH_MEAN_STABLE_CERTIFIED = "pth_mean_stable_certified"
    NOT_PTH_MEAN_STABLE = "not_pth_mean_stable"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class StabilityVerdict:
    """Stability conclusion backed by a certificate report.

    ``conditional_on_asserted_weights`` marks instability verdicts that
    rely on a user-asserted (unverified) stable weight switched system.
    """

    kind: VerdictKind
    p: int
    evidence: "CertificateReport"
    conditional_on_asserted_weights: bool = field(default=False)
