"""Static figure rendering for campaign reports and mode surfaces.

Everything here writes PNG files; no interactive backend is ever touched,
so the functions are safe on headless machines.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_DPI = 150


def _trend_axes(title: str, ylabel: str):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.set_title(title)
    ax.set_xlabel("cycle")
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def plot_connectivity_trend(rows: list[dict], path: Path | str) -> Path:
    """Connectivity versus cycle for an assembled campaign."""
    path = Path(path)
    cycles = [row["cycle"] for row in rows]
    values = [row["connectivity"] for row in rows]
    fig, ax = _trend_axes("Mode-graph connectivity across aging", "connectivity")
    ax.plot(cycles, values, marker="o", color="tab:blue")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def plot_modularity_trend(rows: list[dict], path: Path | str) -> Path:
    """Modularity proxy versus cycle for an assembled campaign."""
    path = Path(path)
    cycles = [row["cycle"] for row in rows]
    values = [row["q_proxy"] for row in rows]
    fig, ax = _trend_axes("Mode-graph modularity proxy across aging", "Q proxy")
    ax.plot(cycles, values, marker="s", color="tab:red")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def plot_mode_surfaces(
    magnitude: np.ndarray,
    phase: np.ndarray,
    mask: np.ndarray,
    path: Path | str,
    cycle: int | None = None,
) -> Path:
    """Magnitude and phase heatmaps of one fitted mode matrix."""
    path = Path(path)
    fig, (ax_mag, ax_ph) = plt.subplots(1, 2, figsize=(10.0, 4.0))
    suffix = f" (cycle {cycle})" if cycle is not None else ""

    mesh = ax_mag.pcolormesh(magnitude, cmap="viridis", shading="auto")
    ax_mag.set_title(f"Mode magnitude{suffix}")
    ax_mag.set_xlabel("mode index")
    ax_mag.set_ylabel("embedding coordinate")
    fig.colorbar(mesh, ax=ax_mag)

    shown_phase = np.where(mask.astype(bool), np.nan, phase)
    mesh = ax_ph.pcolormesh(
        shown_phase, cmap="twilight", shading="auto", vmin=-np.pi, vmax=np.pi
    )
    ax_ph.set_title(f"Mode phase{suffix}")
    ax_ph.set_xlabel("mode index")
    ax_ph.set_ylabel("embedding coordinate")
    fig.colorbar(mesh, ax=ax_ph)

    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def render_campaign_figures(rows: list[dict], directory: Path | str) -> dict[str, Path]:
    """Write the two trend figures next to the delimited outputs."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    return {
        "connectivity": plot_connectivity_trend(rows, directory / "connectivity.png"),
        "modularity": plot_modularity_trend(rows, directory / "modularity.png"),
    }
