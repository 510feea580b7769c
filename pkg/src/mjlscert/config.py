"""JSON run configuration: schema, parsing, diagnostics.

The config is a single JSON object; matrices are nested row-major arrays
of numbers.  Field errors name the offending dotted path, and generator
axiom violations are surfaced with their row indices.

Schema sketch::

    {
      "system": {"modes": [[[...]], ...], "generator": [[...]]},
      "task": "certify" | "optimize" | "simulate" | "sweep",
      "p": 1,
      "m": 2,                       // sweep: largest order, or "m_values"
      "eps": 1e-9,
      "strict": false,
      "weights": {"matrices": [[[...]], ...],
                  "admissibility": "skew_symmetric" | "user_asserted"},
      "optimizer": {"restarts": 20, "seed": 0, ...},
      "sim": {"horizon": 10.0, "trials": 10000, "x0": [...],
              "sample_times": [...] | "num_sample_times": 25,
              "seed": 0, "p": 1, "initial_mode_distribution": [...],
              "window": 5.0},
      "output": {"dir": "out"}
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .linalg import EPS_DEFAULT
from .model import JumpSystem, validate
from .certificates import WeightAdmissibility, WeightSet
from .montecarlo import SimConfig
from .weightopt import OptimizerConfig

TASKS = ("certify", "optimize", "simulate", "sweep")


class ConfigError(ValueError):
    """Configuration schema or validation failure, naming the field."""


@dataclass
class RunConfig:
    """Fully validated run request for the command-line front end."""

    system: JumpSystem
    task: str
    p: int = 1
    m: int = 1
    m_values: list[int] = field(default_factory=lambda: [1])
    eps: float = EPS_DEFAULT
    strict: bool = False
    weights: WeightSet | None = None
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    sim: SimConfig | None = None
    sim_window: float | None = None
    out_dir: Path | None = None
    raw: dict = field(default_factory=dict)


def _get(mapping, key, path, expected=None, required=True, default=None):
    if key not in mapping:
        if required:
            raise ConfigError(f"missing required field: {path}")
        return default
    value = mapping[key]
    if expected is not None and not isinstance(value, expected):
        names = (
            expected.__name__
            if isinstance(expected, type)
            else "/".join(t.__name__ for t in expected)
        )
        raise ConfigError(f"field {path} must be {names}, got {type(value).__name__}")
    return value


def _as_matrix_field(value, path):
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field {path} must be a numeric matrix: {exc}") from exc
    if arr.ndim != 2:
        raise ConfigError(f"field {path} must be a 2-D matrix, got ndim={arr.ndim}")
    return arr


def _as_vector_field(value, path):
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field {path} must be a numeric vector: {exc}") from exc
    if arr.ndim != 1:
        raise ConfigError(f"field {path} must be a 1-D vector, got ndim={arr.ndim}")
    return arr


def _parse_system(data) -> JumpSystem:
    sys_obj = _get(data, "system", "system", dict)
    modes_raw = _get(sys_obj, "modes", "system.modes", list)
    if not modes_raw:
        raise ConfigError("field system.modes must be a non-empty list of matrices")
    modes = [_as_matrix_field(mode, f"system.modes[{i}]") for i, mode in enumerate(modes_raw)]
    generator = _as_matrix_field(_get(sys_obj, "generator", "system.generator"), "system.generator")
    try:
        system = JumpSystem(modes=modes, generator=generator)
    except ValueError as exc:
        raise ConfigError(f"field system: {exc}") from exc
    problems = validate(system)
    if problems:
        raise ConfigError("invalid system: " + "; ".join(problems))
    return system


def _parse_weights(data, system) -> WeightSet | None:
    if "weights" not in data:
        return None
    w_obj = _get(data, "weights", "weights", dict)
    mats_raw = _get(w_obj, "matrices", "weights.matrices", list)
    mats = [_as_matrix_field(w, f"weights.matrices[{i}]") for i, w in enumerate(mats_raw)]
    tag_name = _get(w_obj, "admissibility", "weights.admissibility", str,
                    required=False, default="skew_symmetric")
    try:
        tag = WeightAdmissibility(tag_name)
    except ValueError as exc:
        allowed = ", ".join(t.value for t in WeightAdmissibility)
        raise ConfigError(f"field weights.admissibility must be one of: {allowed}") from exc
    try:
        ws = WeightSet(mats, tag)
    except ValueError as exc:
        raise ConfigError(f"field weights: {exc}") from exc
    if ws.num_modes != system.num_modes:
        raise ConfigError(
            f"field weights.matrices has {ws.num_modes} entries, "
            f"system has {system.num_modes} modes"
        )
    return ws


def _parse_optimizer(data) -> OptimizerConfig:
    opt_obj = _get(data, "optimizer", "optimizer", dict, required=False, default={})
    kwargs = {}
    int_fields = ("restarts", "samples_per_iter", "max_iters", "seed")
    float_fields = ("armijo_c", "armijo_shrink", "sampling_radius", "radius_decay",
                    "convergence_tol")
    for name in int_fields:
        if name in opt_obj:
            kwargs[name] = int(_get(opt_obj, name, f"optimizer.{name}", (int,)))
    for name in float_fields:
        if name in opt_obj:
            kwargs[name] = float(_get(opt_obj, name, f"optimizer.{name}", (int, float)))
    if "init_scale_range" in opt_obj:
        rng = _get(opt_obj, "init_scale_range", "optimizer.init_scale_range", list)
        if len(rng) != 2:
            raise ConfigError("field optimizer.init_scale_range must have two entries")
        kwargs["init_scale_range"] = (float(rng[0]), float(rng[1]))
    unknown = set(opt_obj) - set(int_fields) - set(float_fields) - {"init_scale_range"}
    if unknown:
        raise ConfigError(f"unknown optimizer fields: {', '.join(sorted(unknown))}")
    try:
        return OptimizerConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"field optimizer: {exc}") from exc


def _parse_sim(data, system, p, task) -> tuple[SimConfig | None, float | None]:
    if "sim" not in data:
        if task == "simulate":
            raise ConfigError("missing required field: sim (needed for task simulate)")
        return None, None
    sim_obj = _get(data, "sim", "sim", dict)
    horizon = float(_get(sim_obj, "horizon", "sim.horizon", (int, float),
                         required=False, default=10.0))
    if horizon <= 0:
        raise ConfigError("field sim.horizon must be positive")
    if "sample_times" in sim_obj:
        times = _as_vector_field(sim_obj["sample_times"], "sim.sample_times")
    else:
        count = int(_get(sim_obj, "num_sample_times", "sim.num_sample_times", (int,),
                         required=False, default=25))
        if count < 2:
            raise ConfigError("field sim.num_sample_times must be >= 2")
        times = np.linspace(0.0, horizon, count)
    x0 = _as_vector_field(_get(sim_obj, "x0", "sim.x0"), "sim.x0")
    if x0.shape != (system.dim,):
        raise ConfigError(f"field sim.x0 must have length {system.dim}, got {x0.size}")
    dist = None
    if "initial_mode_distribution" in sim_obj:
        dist = _as_vector_field(
            sim_obj["initial_mode_distribution"], "sim.initial_mode_distribution"
        )
    trials = int(_get(sim_obj, "trials", "sim.trials", (int,), required=False, default=10_000))
    seed = int(_get(sim_obj, "seed", "sim.seed", (int,), required=False, default=0))
    sim_p = int(_get(sim_obj, "p", "sim.p", (int,), required=False, default=p))
    max_jumps = int(_get(sim_obj, "max_jumps_per_trial", "sim.max_jumps_per_trial", (int,),
                         required=False, default=1_000_000))
    window = _get(sim_obj, "window", "sim.window", (int, float), required=False, default=None)
    window = float(window) if window is not None else None
    known = {"horizon", "sample_times", "num_sample_times", "x0", "initial_mode_distribution",
             "trials", "seed", "p", "max_jumps_per_trial", "window"}
    unknown = set(sim_obj) - known
    if unknown:
        raise ConfigError(f"unknown sim fields: {', '.join(sorted(unknown))}")
    try:
        cfg = SimConfig(
            horizon=horizon,
            sample_times=times,
            trials=trials,
            x0=x0,
            initial_mode_distribution=dist,
            p=sim_p,
            seed=seed,
            max_jumps_per_trial=max_jumps,
        )
    except ValueError as exc:
        raise ConfigError(f"field sim: {exc}") from exc
    return cfg, window


def parse_config_dict(data: dict) -> RunConfig:
    """Validate a config mapping into a RunConfig."""
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    task = _get(data, "task", "task", str)
    if task not in TASKS:
        raise ConfigError(f"field task must be one of: {', '.join(TASKS)}; got {task!r}")
    system = _parse_system(data)
    p = int(_get(data, "p", "p", (int,), required=False, default=1))
    if p < 1:
        raise ConfigError("field p must be >= 1")
    m = int(_get(data, "m", "m", (int,), required=False, default=1))
    if m < 1:
        raise ConfigError("field m must be >= 1")
    if "m_values" in data:
        mv_raw = _get(data, "m_values", "m_values", list)
        try:
            m_values = sorted(set(int(v) for v in mv_raw))
        except (TypeError, ValueError) as exc:
            raise ConfigError("field m_values must be a list of integers") from exc
        if not m_values or m_values[0] < 1:
            raise ConfigError("field m_values must contain positive integers")
    else:
        m_values = list(range(1, m + 1))
    eps = float(_get(data, "eps", "eps", (int, float), required=False, default=EPS_DEFAULT))
    if eps < 0:
        raise ConfigError("field eps must be nonnegative")
    strict = bool(_get(data, "strict", "strict", bool, required=False, default=False))
    weights = _parse_weights(data, system)
    if weights is not None and task == "certify" and m != 1 and weights.m != m:
        raise ConfigError(f"field m={m} conflicts with explicit weights of order {weights.m}")
    optimizer = _parse_optimizer(data)
    sim, window = _parse_sim(data, system, p, task)
    out_dir = None
    if "output" in data:
        out_obj = _get(data, "output", "output", dict)
        dirname = _get(out_obj, "dir", "output.dir", str, required=False, default=None)
        if dirname is not None:
            out_dir = Path(dirname)
    if task == "certify" and weights is None and m != 1:
        raise ConfigError(
            "task certify with m > 1 needs explicit weights; use task optimize to search"
        )
    return RunConfig(
        system=system,
        task=task,
        p=p,
        m=m,
        m_values=m_values,
        eps=eps,
        strict=strict,
        weights=weights,
        optimizer=optimizer,
        sim=sim,
        sim_window=window,
        out_dir=out_dir,
        raw=data,
    )


def parse_config(path) -> RunConfig:
    """Load and validate a JSON config file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return parse_config_dict(data)
