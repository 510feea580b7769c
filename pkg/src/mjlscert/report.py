"""Machine-readable run reports: JSON round-trip plus CSV trajectories.

A report is plain data (dicts, lists, numbers, strings, None) so that
serializing to JSON and re-parsing reproduces an equal in-memory object.
"""

from __future__ import annotations

import csv
import json
import sys
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path

import numpy as np

from .certificates import CertificateReport, WeightSet, WeightAdmissibility
from .model import StabilityVerdict
from .montecarlo import TrajectoryStats
from .weightopt import OptimResult


def _plain(obj):
    """Recursively convert numpy containers/scalars to plain Python data."""
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def versions() -> dict:
    import matplotlib
    import scipy

    try:
        package = metadata.version("mjlscert")
    except metadata.PackageNotFoundError:  # running from a source tree
        package = "0.1.0"
    return {
        "mjlscert": package,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "matplotlib": matplotlib.__version__,
        "python": sys.version.split()[0],
    }


def weight_set_to_dict(weights: WeightSet) -> dict:
    return {
        "m": weights.m,
        "admissibility": weights.admissibility.value,
        "matrices": _plain(list(weights.weights)),
    }


def weight_set_from_dict(data: dict) -> WeightSet:
    return WeightSet(data["matrices"], WeightAdmissibility(data["admissibility"]))


def certificate_to_dict(report: CertificateReport) -> dict:
    return {
        "kind": report.certificate_kind.value,
        "p": report.p,
        "mu": float(report.mu),
        "dominant_eigenvalue": [
            float(report.dominant_eigenvalue.real),
            float(report.dominant_eigenvalue.imag),
        ],
        "hurwitz": bool(report.hurwitz),
        "order": int(report.order),
        "eps": float(report.eps),
        "weights": None if report.weight_set is None else weight_set_to_dict(report.weight_set),
    }


def verdict_to_dict(verdict: StabilityVerdict, evidence_index: int) -> dict:
    return {
        "kind": verdict.kind.value,
        "p": verdict.p,
        "conditional_on_asserted_weights": bool(verdict.conditional_on_asserted_weights),
        "evidence_index": evidence_index,
    }


def optimization_to_dict(result: OptimResult) -> dict:
    return {
        "best_mu": float(result.best_mu),
        "best_params": {
            "m": result.best_params.m,
            "num_modes": result.best_params.num_modes,
            "values": _plain(result.best_params.values),
        },
        "best_weights": weight_set_to_dict(result.best_weights),
        "mu_traces": _plain(result.mu_traces),
        "iterations": int(result.iterations),
        "wall_time": float(result.wall_time),
    }


def simulation_to_dict(stats: TrajectoryStats, nondecay: bool | None) -> dict:
    return {
        "times": _plain(stats.times),
        "mean_norm_p": _plain(stats.mean_norm_p),
        "stderr": _plain(stats.stderr),
        "lifted_moment": _plain(stats.lifted_moment),
        "lifted_stderr": _plain(stats.lifted_stderr),
        "mode_occupancy": _plain(stats.mode_occupancy),
        "trials_used": int(stats.trials_used),
        "p": int(stats.p),
        "empirical_nondecay": nondecay,
    }


@dataclass
class Report:
    """Top-level run report; all fields are JSON-plain data."""

    input: dict
    task: str
    verdict: dict | None
    certificates: list = field(default_factory=list)
    optimization: dict | None = None
    simulation: dict | None = None
    sweep: list | None = None
    versions: dict = field(default_factory=versions)
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        return _plain(asdict(self))

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        return cls(
            input=data["input"],
            task=data["task"],
            verdict=data["verdict"],
            certificates=data.get("certificates", []),
            optimization=data.get("optimization"),
            simulation=data.get("simulation"),
            sweep=data.get("sweep"),
            versions=data.get("versions", {}),
            wall_time=data.get("wall_time", 0.0),
        )

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def save(self, path) -> Path:
        path = Path(path)
        path.write_text(self.to_json() + "\n", encoding="utf-8")
        return path

    @classmethod
    def load(cls, path) -> "Report":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def write_trajectory_csv(stats: TrajectoryStats, path) -> Path:
    """Delimited trajectory output: time, mean norm^p, standard error."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["time", "mean_norm_p", "stderr"])
        for t, mean, se in zip(stats.times, stats.mean_norm_p, stats.stderr):
            writer.writerow([f"{t:.12g}", f"{mean:.12g}", f"{se:.12g}"])
    return path


def write_sweep_csv(rows, path) -> Path:
    """Delimited sweep output: weight order, best abscissa found."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["m", "best_mu"])
        for m, best_mu in rows:
            writer.writerow([m, f"{best_mu:.12g}"])
    return path
