"""Event-driven Monte Carlo simulation of jump linear systems.

Trials sample the embedded chain exactly (exponential holding times,
categorical jump targets) and propagate the state through each holding
interval with the exact matrix exponential flow, so discrepancies against
the lifted moment reference are purely statistical.  Per mode the flow is
evaluated through a cached eigendecomposition when it is well conditioned,
falling back to a fresh ``expm`` per segment otherwise; both paths evaluate
the exact flow, neither time-steps the ODE.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .certificates import lifted_certificate
from .lifting import lift_vector, make_basis
from .model import JumpSystem, require_valid

# Eigenvector condition number above which a mode falls back to expm.
_EIG_COND_CAP = 1e8

# Trials per accumulation chunk; keeps peak memory modest at any trial count.
_CHUNK_TRIALS = 4096


@dataclass(frozen=True)
class SimConfig:
    """Simulation run settings.

    ``sample_times`` must be sorted and lie in [0, horizon]; the initial
    mode distribution defaults to uniform over modes.
    """

    horizon: float
    sample_times: np.ndarray
    trials: int
    x0: np.ndarray
    initial_mode_distribution: np.ndarray | None = None
    p: int = 1
    seed: int = 0
    max_jumps_per_trial: int = 1_000_000

    def __post_init__(self):
        times = np.asarray(self.sample_times, dtype=float)
        if times.ndim != 1 or times.size == 0:
            raise ValueError("sample_times must be a non-empty 1-D sequence")
        if np.any(np.diff(times) < 0):
            raise ValueError("sample_times must be sorted ascending")
        if times[0] < 0 or times[-1] > self.horizon + 1e-12:
            raise ValueError("sample_times must lie in [0, horizon]")
        x0 = np.asarray(self.x0, dtype=float)
        if x0.ndim != 1 or not np.all(np.isfinite(x0)):
            raise ValueError("x0 must be a finite 1-D vector")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.p < 1:
            raise ValueError("p must be >= 1")
        if self.max_jumps_per_trial < 1:
            raise ValueError("max_jumps_per_trial must be >= 1")
        dist = self.initial_mode_distribution
        if dist is not None:
            dist = np.asarray(dist, dtype=float)
            if dist.ndim != 1 or np.any(dist < 0) or abs(dist.sum() - 1.0) > 1e-12:
                raise ValueError("initial_mode_distribution must be a probability vector")
        object.__setattr__(self, "sample_times", times)
        object.__setattr__(self, "x0", x0)
        object.__setattr__(
            self, "initial_mode_distribution", dist if dist is None else dist.copy()
        )


@dataclass
class TrajectoryStats:
    """Trial-averaged moment estimates along the sample grid."""

    times: np.ndarray
    mean_norm_p: np.ndarray
    stderr: np.ndarray
    lifted_moment: np.ndarray  # (num_times, N * n_p) estimate of E[e_mode (x) lift(x)]
    lifted_stderr: np.ndarray
    mode_occupancy: np.ndarray  # (num_times, N) empirical chain marginal
    trials_used: int
    p: int
    per_trial_norm_p: np.ndarray | None = None


class JumpCapExceededError(RuntimeError):
    """A trial exceeded the jump cap (near-explosive rate configuration)."""


class _ModeFlow:
    """Exact flow x -> expm(a*h) @ x for one mode."""

    def __init__(self, a: np.ndarray):
        self.a = a
        self.fast = False
        try:
            d, v = np.linalg.eig(a)
            cond = np.linalg.cond(v)
        except np.linalg.LinAlgError:
            cond = np.inf
        if np.isfinite(cond) and cond < _EIG_COND_CAP:
            self.d = d
            self.v = v
            self.vinv = np.linalg.inv(v)
            self.fast = True

    def step(self, x: np.ndarray, h: float) -> np.ndarray:
        if h == 0.0:
            return x.copy()
        if self.fast:
            return (self.v @ (np.exp(self.d * h) * (self.vinv @ x))).real
        return scipy.linalg.expm(self.a * h) @ x


def _draw_index(rng: np.random.Generator, cdf: np.ndarray) -> int:
    return int(np.searchsorted(cdf, rng.random(), side="right"))


class _Moments:
    """Streaming mean/variance with exact pairwise chunk combination."""

    def __init__(self, shape):
        self.count = 0
        self.mean = np.zeros(shape)
        self.m2 = np.zeros(shape)

    def add_chunk(self, chunk: np.ndarray):
        k = chunk.shape[0]
        if k == 0:
            return
        mean_c = chunk.mean(axis=0)
        m2_c = ((chunk - mean_c) ** 2).sum(axis=0)
        if self.count == 0:
            self.count, self.mean, self.m2 = k, mean_c, m2_c
            return
        total = self.count + k
        delta = mean_c - self.mean
        self.mean = self.mean + delta * (k / total)
        self.m2 = self.m2 + m2_c + delta**2 * (self.count * k / total)
        self.count = total

    def stderr(self) -> np.ndarray:
        if self.count < 2:
            return np.zeros_like(self.mean)
        return np.sqrt(np.maximum(self.m2, 0.0) / (self.count - 1) / self.count)


def simulate(
    system: JumpSystem,
    cfg: SimConfig,
    collect_per_trial: bool = False,
) -> TrajectoryStats:
    """Run ``cfg.trials`` independent trials and average the observables.

    Deterministic for a fixed seed: every trial draws from its own stream
    spawned from the master seed, and accumulation order is fixed.
    ``collect_per_trial`` additionally retains each trial's norm^p samples
    (diagnostics; memory grows with trials * len(sample_times)).
    """
    require_valid(system)
    n = system.dim
    num_modes = system.num_modes
    if cfg.x0.shape != (n,):
        raise ValueError(f"x0 must have length {n}, got {cfg.x0.shape}")
    dist = cfg.initial_mode_distribution
    if dist is None:
        dist = np.full(num_modes, 1.0 / num_modes)
    if dist.shape != (num_modes,):
        raise ValueError(f"initial_mode_distribution must have length {num_modes}")

    basis = make_basis(n, cfg.p)
    dim_lift = basis.size
    times = cfg.sample_times
    num_times = times.size
    flows = [_ModeFlow(a) for a in system.modes]
    rates = -np.diag(system.generator)
    init_cdf = np.cumsum(dist)
    jump_cdfs = []
    for i in range(num_modes):
        row = np.maximum(system.generator[i].copy(), 0.0)
        row[i] = 0.0
        total = row.sum()
        jump_cdfs.append(np.cumsum(row / total) if total > 0 else np.cumsum(row))

    norm_moments = _Moments((num_times,))
    lift_moments = _Moments((num_times, num_modes * dim_lift))
    occupancy = np.zeros((num_times, num_modes))
    per_trial = np.zeros((cfg.trials, num_times)) if collect_per_trial else None

    streams = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)

    done = 0
    while done < cfg.trials:
        chunk = min(_CHUNK_TRIALS, cfg.trials - done)
        norms = np.zeros((chunk, num_times))
        lifted = np.zeros((chunk, num_times, num_modes * dim_lift))
        for c in range(chunk):
            rng = np.random.default_rng(streams[done + c])
            mode = _draw_index(rng, init_cdf)
            x = cfg.x0.copy()
            t = 0.0
            ti = 0
            jumps = 0
            while ti < num_times:
                if rates[mode] > 0.0:
                    hold = rng.exponential(1.0 / rates[mode])
                    t_next = t + hold
                else:
                    t_next = np.inf  # absorbing mode: never leaves
                while ti < num_times and times[ti] <= t_next:
                    xs = flows[mode].step(x, times[ti] - t)
                    norms[c, ti] = np.linalg.norm(xs) ** cfg.p
                    block = slice(mode * dim_lift, (mode + 1) * dim_lift)
                    lifted[c, ti, block] = lift_vector(basis, xs)
                    occupancy[ti, mode] += 1.0
                    ti += 1
                if ti >= num_times:
                    break
                x = flows[mode].step(x, t_next - t)
                t = t_next
                mode = _draw_index(rng, jump_cdfs[mode])
                jumps += 1
                if jumps > cfg.max_jumps_per_trial:
                    raise JumpCapExceededError(
                        f"trial {done + c} exceeded {cfg.max_jumps_per_trial} jumps "
                        f"before t={times[-1]}"
                    )
        norm_moments.add_chunk(norms)
        lift_moments.add_chunk(lifted.reshape(chunk, -1))
        if per_trial is not None:
            per_trial[done : done + chunk] = norms
        done += chunk

    return TrajectoryStats(
        times=times.copy(),
        mean_norm_p=norm_moments.mean,
        stderr=norm_moments.stderr(),
        lifted_moment=lift_moments.mean.reshape(num_times, num_modes * dim_lift),
        lifted_stderr=lift_moments.stderr().reshape(num_times, num_modes * dim_lift),
        mode_occupancy=occupancy / cfg.trials,
        trials_used=cfg.trials,
        p=cfg.p,
        per_trial_norm_p=per_trial,
    )


def moment_ode_reference(system: JumpSystem, p: int, x0, mode0: int, times) -> np.ndarray:
    """Exact lifted moment trajectory from the certificate flow.

    Returns ``expm(T t) (e_mode0 (x) lift(x0))`` for each requested time,
    where T is the degree-p certificate; this is what the trial-averaged
    lifted moment estimates.
    """
    require_valid(system)
    times = np.asarray(times, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    if not 0 <= mode0 < system.num_modes:
        raise ValueError(f"mode0 must be in [0, {system.num_modes}), got {mode0}")
    t_matrix = lifted_certificate(system, p)
    basis = make_basis(system.dim, p)
    v0 = np.zeros(t_matrix.shape[0])
    v0[mode0 * basis.size : (mode0 + 1) * basis.size] = lift_vector(basis, x0)
    return np.array([scipy.linalg.expm(t_matrix * t) @ v0 for t in times])


def empirical_instability_check(stats: TrajectoryStats, window: float) -> bool:
    """True when the trailing-window mean norm shows no significant decay.

    Fits an ordinary least-squares line to ``log(mean_norm_p)`` over the
    trailing ``window`` of sample times and reports whether
    ``slope + 2 * stderr(slope) >= 0``.  Advisory only; certificate verdicts
    always take precedence.
    """
    if window <= 0:
        raise ValueError("window must be positive")
    times = stats.times
    span = float(times[-1] - times[0])
    if span < 2 * window - 1e-12:
        raise ValueError(f"sample times span {span}, need at least two windows of {window}")
    mask = times >= times[-1] - window
    t = times[mask]
    y = stats.mean_norm_p[mask]
    if t.size < 3:
        raise ValueError("insufficient sample times in the trailing window (need >= 3)")
    if np.any(y <= 0):
        return False  # mean already collapsed to zero: decisively decaying
    logy = np.log(y)
    t_centered = t - t.mean()
    sxx = float(np.sum(t_centered**2))
    if sxx == 0.0:
        raise ValueError("trailing window has no time spread")
    slope = float(np.sum(t_centered * logy) / sxx)
    resid = logy - logy.mean() - slope * t_centered
    sigma2 = float(np.sum(resid**2)) / (t.size - 2)
    slope_se = float(np.sqrt(sigma2 / sxx))
    return bool(slope + 2.0 * slope_se >= 0.0)
