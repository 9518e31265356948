"""Static figure emission (vector graphics, no interactive display)."""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["save_lambert_figure", "save_wrapped_pdf_figure"]

_REFERENCE_RADII = (1.0, math.sqrt(2.0), 2.0)


def _save(fig, path) -> None:
    path = str(path)
    metadata = {"Date": None} if path.endswith(".svg") else None
    fig.savefig(path, metadata=metadata)
    plt.close(fig)


def save_lambert_figure(points_uv, path, title: str = "Lambert equal-area projection") -> None:
    """Scatter of projected points with unit, sqrt(2), and 2 radius circles
    (colatitudes 60, 90, and 180 degrees)."""
    uv = np.asarray(points_uv, dtype=float)
    fig, ax = plt.subplots(figsize=(5, 5))
    angles = np.linspace(0.0, 2.0 * math.pi, 361)
    for radius in _REFERENCE_RADII:
        ax.plot(radius * np.cos(angles), radius * np.sin(angles), lw=0.6, color="0.6")
    if uv.size:
        ax.plot(uv[:, 0], uv[:, 1], "o", ms=5, color="C0", mec="k", mew=0.4)
    ax.set_aspect("equal")
    ax.set_xlim(-2.1, 2.1)
    ax.set_ylim(-2.1, 2.1)
    ax.set_xlabel("u")
    ax.set_ylabel("v")
    ax.set_title(title)
    fig.tight_layout()
    _save(fig, path)


def save_wrapped_pdf_figure(curves, path) -> None:
    """One panel per variance: curves maps sigma2 -> (theta, density)."""
    items = sorted(curves.items())
    fig, axes = plt.subplots(1, len(items), figsize=(4 * len(items), 3.2), squeeze=False)
    for ax, (sigma2, (theta, density)) in zip(axes[0], items):
        ax.plot(theta, density, lw=1.2)
        ax.set_xlabel(r"$\theta$")
        ax.set_title(f"$\\sigma^2$ = {sigma2:g}")
        ax.set_xlim(0.0, math.pi)
    axes[0][0].set_ylabel("density")
    fig.tight_layout()
    _save(fig, path)
