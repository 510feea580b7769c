"""Figure rendering for run reports (headless, file output only)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _finish(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def spectrum_figure(eigenvalues, path, title="certificate spectrum", eps=0.0) -> Path:
    """Scatter the certificate spectrum against the Hurwitz boundary."""
    eigenvalues = np.asarray(eigenvalues, dtype=complex)
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    ax.scatter(eigenvalues.real, eigenvalues.imag, s=28, color="tab:blue", zorder=3)
    k = int(np.argmax(eigenvalues.real))
    ax.scatter(
        [eigenvalues.real[k]], [eigenvalues.imag[k]],
        s=70, facecolors="none", edgecolors="tab:red", label="dominant", zorder=4,
    )
    ax.axvline(0.0, color="black", lw=0.8)
    if eps > 0:
        ax.axvline(-eps, color="gray", lw=0.6, ls="--")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def simulation_figure(times, mean_norm_p, stderr, p, path) -> Path:
    """Mean norm^p versus time with a two-standard-error band, log scale."""
    times = np.asarray(times)
    mean = np.asarray(mean_norm_p)
    se = np.asarray(stderr)
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    ax.plot(times, mean, color="tab:blue", label=f"mean ||x(t)||^{p}")
    ax.fill_between(
        times,
        np.maximum(mean - 2 * se, 1e-300),
        mean + 2 * se,
        alpha=0.25,
        color="tab:blue",
        label="±2 stderr",
    )
    if np.all(mean > 0):
        ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel(f"E ||x(t)||^{p}")
    ax.set_title("Monte Carlo mean trajectory")
    ax.legend(loc="best", fontsize=8)
    ax.grid(alpha=0.3, which="both")
    return _finish(fig, path)


def optimization_figure(mu_traces, path) -> Path:
    """Accepted-step abscissa traces for every restart."""
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    best = max(trace[-1] for trace in mu_traces)
    for trace in mu_traces:
        ax.plot(range(len(trace)), trace, color="tab:blue", alpha=0.4, lw=1.0)
    ax.axhline(best, color="tab:red", lw=0.9, ls="--", label=f"best = {best:.4g}")
    ax.axhline(0.0, color="black", lw=0.8)
    ax.set_xlabel("accepted step")
    ax.set_ylabel("certificate abscissa")
    ax.set_title("weight search progress")
    ax.legend(loc="best", fontsize=8)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def sweep_figure(m_values, best_mus, path) -> Path:
    """Best abscissa found per weight order."""
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    ax.plot(m_values, best_mus, marker="o", color="tab:blue")
    ax.axhline(0.0, color="black", lw=0.8)
    ax.set_xlabel("weight order m")
    ax.set_ylabel("best certificate abscissa")
    ax.set_xticks(list(m_values))
    ax.set_title("weight-order sweep")
    ax.grid(alpha=0.3)
    return _finish(fig, path)
