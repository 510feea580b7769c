"""Skew-symmetric weight search maximizing the certificate abscissa.

The weighted certificate is affine in the entries of skew-symmetric
weights, so the search space is R^(N*m*(m-1)/2) and the objective is the
(nonsmooth, nonconvex) spectral abscissa of an affine matrix family.  Any
parameter point whose certificate abscissa is nonnegative certifies
instability, so the optimizer only ever needs to produce lower bounds.

The ascent is gradient sampling: at each iterate, collect eigenvalue
gradients at the iterate and at random nearby points, take the minimum-norm
element of their convex hull as the step direction, and backtrack with an
Armijo condition.  This handles the points where rightmost eigenvalues
coalesce and the abscissa is not differentiable.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .certificates import (
    ORDER_CAP_DEFAULT,
    CertificateTooLargeError,
    WeightSet,
    certificate_order,
    instability_verdict,
    pad_weights,
    weighted_certificate,
)
from .lifting import lift_matrix, make_basis
from .linalg import (
    DEGENERATE_PAIR_TOL,
    EPS_DEFAULT,
    _eig_lr,
    _lone_rightmost_entity,
    _refined_mu,
    spectral_abscissa,
)
from .model import JumpSystem, StabilityVerdict, require_valid

# Radius floor below which a restart gives up shrinking its sampling ball.
_RADIUS_FLOOR = 1e-10

# Restarts whose best value ties the global best within this see the
# smallest-parameter-norm tie-break.
_TIE_TOL = 1e-12


def skew_index_pairs(m: int) -> list[tuple[int, int]]:
    """Strict lower-triangle index pairs (alpha, beta), row-major, 0-based."""
    return [(alpha, beta) for alpha in range(1, m) for beta in range(alpha)]


def skew_generator(m: int, alpha: int, beta: int) -> np.ndarray:
    """Elementary skew matrix: +1 at (alpha, beta), -1 at (beta, alpha)."""
    r = np.zeros((m, m))
    r[alpha, beta] = 1.0
    r[beta, alpha] = -1.0
    return r


@dataclass(frozen=True)
class SkewParams:
    """Coordinates of N skew-symmetric weights of order m.

    ``values`` holds w[i, alpha, beta] for mode i (outer), then the
    lower-triangle pairs of :func:`skew_index_pairs` (inner).
    """

    m: int
    num_modes: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        expected = self.num_modes * self.m * (self.m - 1) // 2
        if vals.shape != (expected,):
            raise ValueError(f"values must have shape ({expected},), got {vals.shape}")
        if expected and not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "values", vals)

    @property
    def per_mode(self) -> int:
        return self.m * (self.m - 1) // 2


def params_to_weights(params: SkewParams) -> WeightSet:
    """Assemble the skew-symmetric weight set from its coordinates."""
    pairs = skew_index_pairs(params.m)
    ws = []
    for i in range(params.num_modes):
        w = np.zeros((params.m, params.m))
        for k, (alpha, beta) in enumerate(pairs):
            v = params.values[i * params.per_mode + k]
            w[alpha, beta] += v
            w[beta, alpha] -= v
        ws.append(w)
    return WeightSet.skew(ws)


def weights_to_params(weights: WeightSet) -> SkewParams:
    """Read skew coordinates off the strict lower triangles."""
    m = weights.m
    pairs = skew_index_pairs(m)
    values = []
    for w in weights.weights:
        if float(np.abs(w + w.T).max()) > 1e-9:
            raise ValueError("weights must be skew-symmetric")
        values.extend(w[alpha, beta] for alpha, beta in pairs)
    return SkewParams(m=m, num_modes=weights.num_modes, values=np.asarray(values, dtype=float))


@dataclass(frozen=True)
class AffineFamily:
    """Weighted certificate as an affine function of skew coordinates.

    ``assemble(values) = base + sum(values[k] * directions[k])`` equals the
    directly-constructed weighted certificate entrywise.
    """

    base: np.ndarray
    directions: tuple[np.ndarray, ...]
    m: int
    num_modes: int
    p: int
    dim: int

    @property
    def num_params(self) -> int:
        return len(self.directions)

    @cached_property
    def _stacked(self) -> np.ndarray:
        if not self.directions:
            return np.zeros((0,) + self.base.shape)
        return np.stack(self.directions)

    def assemble(self, values) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        if values.shape != (self.num_params,):
            raise ValueError(f"expected {self.num_params} parameters, got {values.shape}")
        if self.num_params == 0:
            return self.base.copy()
        return self.base + np.tensordot(values, self._stacked, axes=1)


def build_affine_family(
    system: JumpSystem,
    p: int,
    m: int,
    order_cap: int = ORDER_CAP_DEFAULT,
) -> AffineFamily:
    """Base certificate plus one direction matrix per skew coordinate."""
    require_valid(system)
    n = system.dim
    num_modes = system.num_modes
    order = certificate_order(n, num_modes, p, m)
    if order > order_cap:
        raise CertificateTooLargeError(order, order_cap)
    basis = make_basis(n * m, p)
    base = np.kron(system.generator.T, np.eye(basis.size))
    for i, a in enumerate(system.modes):
        blk = lift_matrix(basis, np.kron(np.eye(m), a))
        base[i * basis.size : (i + 1) * basis.size, i * basis.size : (i + 1) * basis.size] += blk
    directions = []
    for i in range(num_modes):
        e_ii = np.zeros((num_modes, num_modes))
        e_ii[i, i] = 1.0
        for alpha, beta in skew_index_pairs(m):
            lifted = lift_matrix(basis, np.kron(skew_generator(m, alpha, beta), np.eye(n)))
            directions.append(np.kron(e_ii, lifted))
    return AffineFamily(
        base=base,
        directions=tuple(directions),
        m=m,
        num_modes=num_modes,
        p=p,
        dim=n,
    )


def mu_and_gradient(family: AffineFamily, values) -> tuple[float, np.ndarray, bool]:
    """Abscissa, its gradient in the skew coordinates, and a smoothness flag.

    The gradient is the standard first-order eigenvalue perturbation
    Re(y^H Z x / y^H x) at the dominant eigenpair.  ``certified_smooth`` is
    False when the rightmost cluster holds more than one spectral entity (a
    lone simple conjugate pair counts as one: its members move together
    under real perturbations) or when the dominant pair is numerically
    degenerate; the returned gradient is then just one Clarke subgradient
    candidate.
    """
    matrix = family.assemble(values)
    w, vl, vr = _eig_lr(matrix)
    mu, cluster, _ = _refined_mu(w, vl, vr, None)
    k = int(np.argmax(w.real))
    x = vr[:, k]
    y = vl[:, k]
    yx = np.vdot(y, x)
    certified_smooth = _lone_rightmost_entity(w, cluster) and abs(yx) >= DEGENERATE_PAIR_TOL
    if family.num_params == 0:
        return mu, np.zeros(0), certified_smooth
    if abs(yx) == 0.0:
        return mu, np.zeros(family.num_params), False
    grad = np.array(
        [(np.vdot(y, z @ x) / yx).real for z in family.directions]
    )
    return mu, grad, certified_smooth


@dataclass(frozen=True)
class OptimizerConfig:
    """Gradient-sampling settings; defaults match desk-scale certificates."""

    restarts: int = 20
    samples_per_iter: int | None = None  # default: 2 * num_params + 1
    max_iters: int = 300
    init_scale_range: tuple[float, float] = (0.1, 10.0)
    armijo_c: float = 1e-4
    armijo_shrink: float = 0.5
    sampling_radius: float = 0.1
    radius_decay: float = 0.5
    seed: int = 0
    convergence_tol: float = 1e-8

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        lo, hi = self.init_scale_range
        if not (0 < lo <= hi):
            raise ValueError("init_scale_range must be 0 < lo <= hi")
        for name in ("armijo_c", "armijo_shrink", "sampling_radius", "radius_decay",
                     "convergence_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.samples_per_iter is not None and self.samples_per_iter < 1:
            raise ValueError("samples_per_iter must be >= 1")


@dataclass
class OptimResult:
    """Best lower bound found for the skew-weight abscissa supremum."""

    best_params: SkewParams
    best_mu: float
    mu_traces: list[list[float]]
    iterations: int
    wall_time: float
    best_weights: WeightSet


def _min_norm_in_hull(gradients: np.ndarray) -> np.ndarray:
    """Minimum-norm point of the convex hull of the gradient rows.

    Solves min ||G^T lam||^2 over the simplex by projected gradient; the
    problem is tiny (tens of rows) so a fixed-step scheme is plenty.
    """
    count = gradients.shape[0]
    gram = gradients @ gradients.T
    lam = np.full(count, 1.0 / count)
    lipschitz = max(float(np.linalg.eigvalsh(gram).max()), 1e-300)
    for _ in range(500):
        step = lam - (gram @ lam) / lipschitz
        # project onto the probability simplex
        u = np.sort(step)[::-1]
        css = np.cumsum(u) - 1.0
        rho = np.flatnonzero(u - css / (np.arange(count) + 1.0) > 0)[-1]
        new_lam = np.maximum(step - css[rho] / (rho + 1.0), 0.0)
        if float(np.abs(new_lam - lam).max()) < 1e-14:
            lam = new_lam
            break
        lam = new_lam
    return gradients.T @ lam


def _sample_in_ball(rng: np.random.Generator, dim: int, radius: float) -> np.ndarray:
    u = rng.standard_normal(dim)
    norm = float(np.linalg.norm(u))
    if norm == 0.0:
        return np.zeros(dim)
    return u * (radius * rng.uniform() ** (1.0 / dim) / norm)


def _sampled_gradients(family, center_grad, w, rng, radius, count):
    grads = [center_grad]
    for _ in range(count):
        # resample points whose dominant eigenpair is numerically degenerate
        for _attempt in range(10):
            point = w + _sample_in_ball(rng, w.shape[0], radius)
            matrix = family.assemble(point)
            ew, vl, vr = _eig_lr(matrix)
            k = int(np.argmax(ew.real))
            yx = np.vdot(vl[:, k], vr[:, k])
            if abs(yx) >= DEGENERATE_PAIR_TOL:
                break
        else:
            continue  # every resample was degenerate; drop this sample
        x = vr[:, k]
        y = vl[:, k]
        grads.append(
            np.array([(np.vdot(y, z @ x) / yx).real for z in family.directions])
        )
    return np.array(grads)


def _ascend(family, w0, rng, cfg: OptimizerConfig):
    """One gradient-sampling restart; returns (params, mu, trace, iters)."""
    samples = cfg.samples_per_iter or 2 * family.num_params + 1
    w = np.asarray(w0, dtype=float).copy()
    mu, grad, _ = mu_and_gradient(family, w)
    trace = [mu]
    radius = cfg.sampling_radius
    iters = 0
    for _ in range(cfg.max_iters):
        iters += 1
        gradients = _sampled_gradients(family, grad, w, rng, radius, samples)
        direction = _min_norm_in_hull(gradients)
        dir_norm = float(np.linalg.norm(direction))
        if dir_norm <= cfg.convergence_tol:
            radius *= cfg.radius_decay
            if radius < _RADIUS_FLOOR:
                break
            continue
        unit = direction / dir_norm
        step = 1.0
        accepted = False
        for _ in range(40):
            candidate = w + step * unit
            mu_new, grad_new, _ = mu_and_gradient(family, candidate)
            if mu_new >= mu + cfg.armijo_c * step * dir_norm:
                accepted = True
                break
            step *= cfg.armijo_shrink
        if accepted:
            w = candidate
            mu, grad = mu_new, grad_new
            trace.append(mu)
            if step <= cfg.convergence_tol:
                break
        else:
            radius *= cfg.radius_decay
            if radius < _RADIUS_FLOOR:
                break
    return w, mu, trace, iters


def optimize_skew_weights(
    system: JumpSystem,
    p: int,
    m: int,
    cfg: OptimizerConfig | None = None,
    warm_start: SkewParams | WeightSet | None = None,
    order_cap: int = ORDER_CAP_DEFAULT,
) -> OptimResult:
    """Maximize the weighted certificate abscissa over skew weights of order m.

    Returns the best restart's iterate; the value is a valid lower bound on
    the order-m skew-weight supremum by construction.  Deterministic for a
    fixed config seed (each restart draws from its own spawned stream).
    ``warm_start`` replaces the first restart's random initializer.
    """
    cfg = cfg or OptimizerConfig()
    start = time.perf_counter()
    family = build_affine_family(system, p, m, order_cap=order_cap)
    dim = family.num_params

    if warm_start is not None:
        if isinstance(warm_start, WeightSet):
            warm_start = weights_to_params(warm_start)
        if warm_start.m != m or warm_start.num_modes != system.num_modes:
            raise ValueError("warm start shape does not match requested weight order")

    if dim == 0:
        mu, _, _ = mu_and_gradient(family, np.zeros(0))
        params = SkewParams(m=m, num_modes=system.num_modes, values=np.zeros(0))
        return OptimResult(
            best_params=params,
            best_mu=mu,
            mu_traces=[[mu]],
            iterations=0,
            wall_time=time.perf_counter() - start,
            best_weights=params_to_weights(params),
        )

    log_lo, log_hi = (math.log10(s) for s in cfg.init_scale_range)
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    candidates = []  # (mu, param_norm, restart_index, params, trace)
    total_iters = 0
    for r in range(cfg.restarts):
        rng = np.random.default_rng(seeds[r])
        if r == 0 and warm_start is not None:
            w0 = warm_start.values
        else:
            scale = 10.0 ** rng.uniform(log_lo, log_hi)
            w0 = rng.uniform(-scale, scale, size=dim)
        w, mu, trace, iters = _ascend(family, w0, rng, cfg)
        total_iters += iters
        candidates.append((mu, float(np.linalg.norm(w)), r, w, trace))

    best_mu = max(c[0] for c in candidates)
    eligible = [c for c in candidates if c[0] >= best_mu - _TIE_TOL]
    eligible.sort(key=lambda c: (c[1], c[2]))
    winner = eligible[0]
    params = SkewParams(m=m, num_modes=system.num_modes, values=winner[3])
    weights = params_to_weights(params)

    # Close the loop: the directly-built certificate must reproduce the
    # searched value, otherwise the affine assembly is inconsistent.
    mu_check = spectral_abscissa(weighted_certificate(system, p, weights, order_cap=order_cap)).mu
    if abs(mu_check - winner[0]) > 1e-9:
        raise RuntimeError(
            f"re-verified abscissa {mu_check} deviates from searched value {winner[0]}"
        )

    return OptimResult(
        best_params=params,
        best_mu=winner[0],
        mu_traces=[c[4] for c in candidates],
        iterations=total_iters,
        wall_time=time.perf_counter() - start,
        best_weights=weights,
    )


def certify_via_optimization(
    system: JumpSystem,
    p: int,
    m: int,
    cfg: OptimizerConfig | None = None,
    eps: float = EPS_DEFAULT,
    warm_start: SkewParams | WeightSet | None = None,
    order_cap: int = ORDER_CAP_DEFAULT,
) -> tuple[StabilityVerdict, OptimResult]:
    """Search skew weights, then classify the system with the best ones."""
    result = optimize_skew_weights(
        system, p, m, cfg=cfg, warm_start=warm_start, order_cap=order_cap
    )
    weights = result.best_weights if m > 1 else WeightSet.trivial(system.num_modes)
    verdict = instability_verdict(system, p, weights, eps=eps, order_cap=order_cap)
    return verdict, result


def sweep_weight_orders(
    system: JumpSystem,
    p: int,
    m_values,
    cfg: OptimizerConfig | None = None,
    eps: float = EPS_DEFAULT,
    order_cap: int = ORDER_CAP_DEFAULT,
) -> list[tuple[int, OptimResult, StabilityVerdict]]:
    """Optimize over increasing weight orders, warm-starting from padding.

    Each order's first restart starts at the previous winner zero-padded to
    the new order, which makes the reported best values nondecreasing in m
    (padding never lowers the certificate abscissa).
    """
    m_values = sorted(set(int(m) for m in m_values))
    if not m_values or m_values[0] < 1:
        raise ValueError("m_values must be positive integers")
    rows = []
    previous: WeightSet | None = None
    for m in m_values:
        warm = None
        if previous is not None and previous.m < m:
            warm = pad_weights(previous, m)
        verdict, result = certify_via_optimization(
            system, p, m, cfg=cfg, eps=eps, warm_start=warm, order_cap=order_cap
        )
        previous = result.best_weights
        rows.append((m, result, verdict))
    return rows
