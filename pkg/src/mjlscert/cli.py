"""Command-line front end: certify / optimize / simulate / sweep.

Reads a JSON run config (see :mod:`mjlscert.config`), applies flag
overrides, executes the task, prints a summary, and, when an output
directory is given, writes ``report.json`` plus CSV tables and rendered
figures alongside it.

Exit codes: 0 success, 1 error, 2 inconclusive verdict under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import plots, report as report_mod
from .certificates import (
    CertificateTooLargeError,
    WeightAdmissibility,
    WeightSet,
    instability_verdict,
    mean_square_certificate,
    mean_square_verdict,
    weighted_certificate,
)
from .config import ConfigError, RunConfig, parse_config_dict
from .model import VerdictKind
from .montecarlo import empirical_instability_check, simulate
from .weightopt import certify_via_optimization, sweep_weight_orders

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_STRICT_INCONCLUSIVE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mjlscert",
        description="Certify mean instability of Markov jump linear systems.",
    )
    sub = parser.add_subparsers(dest="task", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", type=Path, help="JSON run configuration")
    common.add_argument("--p", type=int, default=None, help="mean-stability degree p")
    common.add_argument("--m", type=int, default=None, help="weight order m (sweep: largest)")
    common.add_argument("--restarts", type=int, default=None, help="optimizer restarts")
    common.add_argument("--seed", type=int, default=None, help="master seed (optimizer and simulator)")
    common.add_argument("--trials", type=int, default=None, help="Monte Carlo trials")
    common.add_argument("--horizon", type=float, default=None, help="simulation horizon")
    common.add_argument("--eps", type=float, default=None, help="Hurwitz decision margin")
    common.add_argument("--out", type=Path, default=None, help="output directory for report files")
    common.add_argument(
        "--strict", action="store_true", help="exit with code 2 on an inconclusive verdict"
    )
    for name in ("certify", "optimize", "simulate", "sweep"):
        sub.add_parser(name, parents=[common], help=f"run the {name} task")
    return parser


def _apply_overrides(data: dict, args: argparse.Namespace) -> dict:
    data = dict(data)
    data["task"] = args.task
    if args.p is not None:
        data["p"] = args.p
    if args.m is not None:
        data["m"] = args.m
        data.pop("m_values", None)
    if args.eps is not None:
        data["eps"] = args.eps
    if args.strict:
        data["strict"] = True
    if args.restarts is not None or args.seed is not None:
        opt = dict(data.get("optimizer", {}))
        if args.restarts is not None:
            opt["restarts"] = args.restarts
        if args.seed is not None:
            opt["seed"] = args.seed
        data["optimizer"] = opt
    if args.trials is not None or args.horizon is not None or args.seed is not None:
        sim = dict(data.get("sim", {}))
        if args.trials is not None:
            sim["trials"] = args.trials
        if args.horizon is not None:
            sim["horizon"] = args.horizon
        if args.seed is not None:
            sim["seed"] = args.seed
        if sim:
            data["sim"] = sim
    if args.out is not None:
        out = dict(data.get("output", {}))
        out["dir"] = str(args.out)
        data["output"] = out
    return data


def _run_certify(cfg: RunConfig):
    weights = cfg.weights or WeightSet.trivial(cfg.system.num_modes)
    verdict = instability_verdict(cfg.system, cfg.p, weights, eps=cfg.eps)
    certs = [(verdict.evidence, weighted_certificate(cfg.system, cfg.p, weights))]
    if cfg.p == 2:
        # The mean-square certificate decides p = 2 both ways for any system;
        # use it when the lifted certificate alone is inconclusive.
        ms_matrix = mean_square_certificate(cfg.system)
        ms_verdict = mean_square_verdict(cfg.system, eps=cfg.eps)
        certs.append((ms_verdict.evidence, ms_matrix))
        if verdict.kind is VerdictKind.INCONCLUSIVE:
            verdict = ms_verdict
    return verdict, certs, None, None, None


def _run_optimize(cfg: RunConfig):
    warm = None
    if (
        cfg.weights is not None
        and cfg.weights.admissibility is WeightAdmissibility.SKEW_SYMMETRIC
        and cfg.weights.m == cfg.m
    ):
        warm = cfg.weights
    verdict, result = certify_via_optimization(
        cfg.system, cfg.p, cfg.m, cfg=cfg.optimizer, eps=cfg.eps, warm_start=warm
    )
    matrix = weighted_certificate(cfg.system, cfg.p, verdict.evidence.weight_set)
    return verdict, [(verdict.evidence, matrix)], result, None, None


def _run_simulate(cfg: RunConfig):
    stats = simulate(cfg.system, cfg.sim)
    span = float(stats.times[-1] - stats.times[0])
    window = cfg.sim_window if cfg.sim_window is not None else span / 2.0
    nondecay = empirical_instability_check(stats, window)
    return None, [], None, (stats, nondecay), None


def _run_sweep(cfg: RunConfig):
    rows = sweep_weight_orders(
        cfg.system, cfg.p, cfg.m_values, cfg=cfg.optimizer, eps=cfg.eps
    )
    verdict = rows[-1][2]
    certs = [
        (
            verdict.evidence,
            weighted_certificate(cfg.system, cfg.p, verdict.evidence.weight_set),
        )
    ]
    return verdict, certs, rows[-1][1], None, rows


_RUNNERS = {
    "certify": _run_certify,
    "optimize": _run_optimize,
    "simulate": _run_simulate,
    "sweep": _run_sweep,
}


def _write_outputs(cfg: RunConfig, rep: report_mod.Report, certs, simulation, sweep_rows):
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    written = [rep.save(out / "report.json")]
    for cert_report, matrix in certs:
        kind = cert_report.certificate_kind.value
        written.append(
            plots.spectrum_figure(
                np.linalg.eigvals(matrix),
                out / f"fig_spectrum_{kind}.png",
                title=f"{kind} certificate spectrum (mu={cert_report.mu:.4g})",
                eps=cert_report.eps,
            )
        )
    if rep.optimization is not None:
        written.append(
            plots.optimization_figure(rep.optimization["mu_traces"], out / "fig_optimization.png")
        )
    if simulation is not None:
        stats, _ = simulation
        written.append(report_mod.write_trajectory_csv(stats, out / "trajectory.csv"))
        written.append(
            plots.simulation_figure(
                stats.times, stats.mean_norm_p, stats.stderr, stats.p, out / "fig_simulation.png"
            )
        )
    if sweep_rows is not None:
        table = [(m, result.best_mu) for m, result, _ in sweep_rows]
        written.append(report_mod.write_sweep_csv(table, out / "sweep.csv"))
        written.append(
            plots.sweep_figure(
                [m for m, _ in table], [mu for _, mu in table], out / "fig_sweep.png"
            )
        )
    return written


def _summarize(rep: report_mod.Report, simulation, sweep_rows) -> str:
    lines = [f"task: {rep.task}"]
    for cert in rep.certificates:
        lines.append(
            f"  {cert['kind']} certificate (p={cert['p']}, order {cert['order']}): "
            f"mu = {cert['mu']:.6g}, hurwitz = {cert['hurwitz']}"
        )
    if rep.optimization is not None:
        lines.append(
            f"  best abscissa over skew weights: {rep.optimization['best_mu']:.6g} "
            f"({rep.optimization['iterations']} iterations, "
            f"{rep.optimization['wall_time']:.2f} s)"
        )
    if sweep_rows is not None:
        for m, result, _ in sweep_rows:
            lines.append(f"  m = {m}: best abscissa = {result.best_mu:.6g}")
    if simulation is not None:
        stats, nondecay = simulation
        lines.append(
            f"  simulated {stats.trials_used} trials to t = {stats.times[-1]:.4g}; "
            f"mean norm^{stats.p} at end = {stats.mean_norm_p[-1]:.6g} "
            f"(stderr {stats.stderr[-1]:.2g})"
        )
        lines.append(f"  empirical non-decay (advisory): {nondecay}")
    if rep.verdict is not None:
        flag = " [conditional on asserted weight stability]" if rep.verdict[
            "conditional_on_asserted_weights"
        ] else ""
        lines.append(f"verdict: {rep.verdict['kind']} (p={rep.verdict['p']}){flag}")
    return "\n".join(lines)


def run(cfg: RunConfig) -> tuple[int, report_mod.Report]:
    """Execute a validated run config; returns (exit code, report)."""
    start = time.perf_counter()
    verdict, certs, optim, simulation, sweep_rows = _RUNNERS[cfg.task](cfg)

    cert_dicts = [report_mod.certificate_to_dict(c) for c, _ in certs]
    verdict_dict = None
    if verdict is not None:
        evidence_index = next(
            i for i, (c, _) in enumerate(certs) if c is verdict.evidence
        )
        verdict_dict = report_mod.verdict_to_dict(verdict, evidence_index)
    rep = report_mod.Report(
        input=report_mod._plain(cfg.raw),
        task=cfg.task,
        verdict=verdict_dict,
        certificates=cert_dicts,
        optimization=None if optim is None else report_mod.optimization_to_dict(optim),
        simulation=None
        if simulation is None
        else report_mod.simulation_to_dict(simulation[0], simulation[1]),
        sweep=None
        if sweep_rows is None
        else [{"m": m, "best_mu": float(r.best_mu)} for m, r, _ in sweep_rows],
        wall_time=time.perf_counter() - start,
    )

    print(_summarize(rep, simulation, sweep_rows))
    if cfg.out_dir is not None:
        for path in _write_outputs(cfg, rep, certs, simulation, sweep_rows):
            print(f"wrote {path}")

    if cfg.strict and verdict is not None and verdict.kind is VerdictKind.INCONCLUSIVE:
        return EXIT_STRICT_INCONCLUSIVE, rep
    return EXIT_OK, rep


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
        return EXIT_ERROR
    try:
        cfg = parse_config_dict(_apply_overrides(raw, args))
        code, _ = run(cfg)
    except (ConfigError, CertificateTooLargeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return code


if __name__ == "__main__":
    sys.exit(main())
