"""Figure rendering for the report paths.

Each CLI report that writes delimited output also renders a PNG next to it:
the solved boundary profile, the recovery trace, or the deficit landscape.
Rendering is headless (Agg) and byte-deterministic for identical inputs, so
figures participate in the same reproducibility contract as the CSV/JSON.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .geometry import StarDomain2D
from .identities import BoundaryLaw, IdentityReport, compatibility_c
from .poisson2d import PoissonSolution2D
from .shape import RecoveryTrace

_DPI = 150


def _draw_domain(ax, domain: StarDomain2D, label: str | None = None, **kwargs):
    theta = np.linspace(0.0, 2.0 * np.pi, 720)
    rho = domain.radius(theta)
    ax.plot(rho * np.cos(theta), rho * np.sin(theta), label=label, **kwargs)
    ax.plot([0.0], [0.0], "k+", markersize=6)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")


def plot_solution(sol: PoissonSolution2D, law: BoundaryLaw | None,
                  path: str | Path) -> Path:
    """Domain shape plus the normal-derivative trace around the boundary."""
    grid = sol.domain.boundary_grid(512)
    dudn = sol.normal_derivative(grid)
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    _draw_domain(ax0, sol.domain, color="tab:blue")
    ax0.set_title("domain")
    ax1.plot(grid.theta, dudn, color="tab:blue", label="du/dnu")
    if law is not None and law.kind != "general-f":
        c_star = compatibility_c(sol.domain, sol.alpha, law)
        ax1.plot(grid.theta, -law.target(grid.r, c_star), "--", color="tab:red",
                 label=f"-{law.kind} target")
    ax1.set_xlabel("theta")
    ax1.set_ylabel("normal derivative")
    ax1.legend(loc="best", fontsize=8)
    ax1.set_title("boundary flux")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def plot_report(report: IdentityReport, sol: PoissonSolution2D,
                law: BoundaryLaw, path: str | Path) -> Path:
    """Solution panels plus a bar chart of the report's residuals."""
    grid = sol.domain.boundary_grid(512)
    dudn = sol.normal_derivative(grid)
    fig, axes = plt.subplots(1, 3, figsize=(12.5, 3.6))
    _draw_domain(axes[0], sol.domain, color="tab:blue")
    axes[0].set_title(f"domain (cN = {report.cn:.6f})")
    axes[1].plot(grid.theta, dudn, color="tab:blue", label="du/dnu")
    if law.kind != "general-f":
        axes[1].plot(grid.theta, -law.target(grid.r, report.c_star), "--",
                     color="tab:red", label="law target")
    axes[1].set_xlabel("theta")
    axes[1].legend(loc="best", fontsize=8)
    axes[1].set_title(f"deficit = {report.deficit:.3e}")
    names = ["interior", "energy", "h harm", "V harm", "PDE fd", "deficit"]
    values = [report.interior_identity_rel, report.energy_identity_rel,
              report.h_harmonicity, report.v_harmonicity,
              report.pde_fd_max, report.deficit]
    floored = [max(v, 1e-17) for v in values]
    axes[2].bar(range(len(names)), floored, color="tab:gray")
    axes[2].set_yscale("log")
    axes[2].set_xticks(range(len(names)))
    axes[2].set_xticklabels(names, rotation=30, fontsize=8, ha="right")
    axes[2].set_title("residuals")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def plot_recovery(trace: RecoveryTrace, path: str | Path) -> Path:
    """Deficit history and initial/final shapes of a recovery run."""
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    deficits = np.maximum(trace.deficits, 1e-17)
    ax0.semilogy(range(len(deficits)), deficits, "o-", color="tab:blue",
                 markersize=3)
    ax0.set_xlabel("iteration")
    ax0.set_ylabel("deficit")
    ax0.set_title(f"converged = {trace.converged}")
    _draw_domain(ax1, trace.iterates[0].domain, label="initial",
                 color="tab:gray", linestyle="--")
    _draw_domain(ax1, trace.final_domain, label="final", color="tab:blue")
    ax1.legend(loc="best", fontsize=8)
    ax1.set_title(f"fourier energy = {trace.final_fourier_energy:.2e}")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def plot_landscape(results: dict[int, list[tuple[float, float]]],
                   path: str | Path) -> Path:
    """Deficit against perturbation amplitude, one curve per Fourier mode."""
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    for mode, pairs in sorted(results.items()):
        eps = [p[0] for p in pairs]
        def_ = [p[1] for p in pairs]
        ax.plot(eps, def_, "o-", markersize=3, label=f"mode {mode}")
    ax.set_xlabel("perturbation amplitude")
    ax.set_ylabel("deficit")
    ax.legend(loc="best", fontsize=8)
    ax.set_title("deficit landscape")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path
