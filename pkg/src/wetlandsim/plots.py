"""Render report figures to files (headless Agg backend).

pyplot is not thread-safe; a module lock serializes each figure's whole
create/save/close lifecycle so parallel scenario runs can share this
module.
"""

from __future__ import annotations

import threading
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .dynamics import Trajectory
from .energy import EnergySeries

__all__ = ["trajectory_heatmaps", "spatial_profiles", "energy_decay", "fit_report", "human_profiles"]

_DPI = 130
_PLOT_LOCK = threading.Lock()


def _save(fig, path):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)


def trajectory_heatmaps(traj: Trajectory, path, probe_z: float | None = None):
    """Space-time heatmaps of both species plus point time series.

    The probe position defaults to pi/5.
    """
    z = traj.grid.nodes
    t = traj.times
    X1 = np.array([s.x1.values for s in traj.snapshots])
    X2 = np.array([s.x2.values for s in traj.snapshots])
    zp = np.pi / 5 if probe_z is None else probe_z
    jp = int(np.argmin(np.abs(z - zp)))

    with _PLOT_LOCK:
        fig, axes = plt.subplots(2, 2, figsize=(9, 6), constrained_layout=True)
        for ax, X, label in ((axes[0, 0], X1, "fish x1"), (axes[0, 1], X2, "boyciana x2")):
            im = ax.pcolormesh(z, t, X, shading="nearest", cmap="viridis")
            ax.set_xlabel("z")
            ax.set_ylabel("t")
            ax.set_title(label)
            fig.colorbar(im, ax=ax)
        ax = axes[1, 0]
        ax.plot(t, X1[:, jp], label="x1")
        ax.plot(t, X2[:, jp], label="x2")
        ax.set_xlabel("t")
        ax.set_ylabel(f"density at z = {z[jp]:.3f}")
        ax.legend()
        axes[1, 1].axis("off")
        _save(fig, path)


def spatial_profiles(traj: Trajectory, path, n_curves: int = 6):
    """Spatial curves of both species at evenly thinned snapshot times."""
    z = traj.grid.nodes
    idx = np.unique(np.linspace(0, len(traj.snapshots) - 1, n_curves).astype(int))
    with _PLOT_LOCK:
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.4), constrained_layout=True)
        for i in idx:
            s = traj.snapshots[i]
            ax1.plot(z, s.x1.values, label=f"t = {s.t:g}")
            ax2.plot(z, s.x2.values, label=f"t = {s.t:g}")
        ax1.set_xlabel("z")
        ax1.set_ylabel("x1")
        ax2.set_xlabel("z")
        ax2.set_ylabel("x2")
        ax2.legend(fontsize=7)
        _save(fig, path)


def energy_decay(series: EnergySeries, path):
    """Semi-log energy series with the exponential bound when available."""
    with _PLOT_LOCK:
        fig, ax = plt.subplots(figsize=(5.2, 3.4), constrained_layout=True)
        pos = series.energy > 0
        ax.semilogy(series.times[pos], series.energy[pos], label="E(t)")
        if series.bound is not None:
            ax.semilogy(series.times, np.maximum(series.bound, 1e-300), "--", label="bound")
        ax.set_xlabel("t")
        ax.set_ylabel("E")
        ax.legend()
        _save(fig, path)


def human_profiles(grid_nodes: np.ndarray, profiles: dict, path):
    """Overlaid human-distribution profiles keyed by label."""
    with _PLOT_LOCK:
        fig, ax = plt.subplots(figsize=(5.2, 3.4), constrained_layout=True)
        for label, values in profiles.items():
            ax.plot(grid_nodes, values, label=label)
        ax.set_xlabel("z")
        ax.set_ylabel("x3")
        ax.legend()
        _save(fig, path)


def fit_report(result, obs, sim, path):
    """Objective trace plus final simulated-vs-observed scatter."""
    with _PLOT_LOCK:
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.4), constrained_layout=True)
        ax1.semilogy(np.arange(1, len(result.trace) + 1), np.maximum(result.trace, 1e-300))
        ax1.set_xlabel("objective evaluations")
        ax1.set_ylabel("best objective")
        if sim is not None:
            for i, label in enumerate(("x1", "x2")):
                ax2.plot(obs.densities[i].ravel(), sim[i].ravel(), ".", ms=3, label=label)
            lim = max(obs.densities.max(), sim.max())
            ax2.plot([0, lim], [0, lim], "k--", lw=0.7)
            ax2.set_xlabel("observed")
            ax2.set_ylabel("simulated")
            ax2.legend()
        _save(fig, path)
