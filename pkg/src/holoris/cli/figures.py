"""Figure rendering for the experiment runners.

Heatmap tables become per-scheme rate-ratio maps over the receiver
rectangle; ensembles become survival (C-CDF) curves. Figures are written
next to the delimited output and never replace it.
"""

from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from ..schemes import Scheme
from .experiments import survival_curve


def render_heatmap(rows: list[dict], path: str) -> None:
    l_values = np.unique([row["l_r"] for row in rows])
    d_values = np.unique([row["d_r"] for row in rows])
    schemes = [s for s in rows[0]["ratios"] if s is not Scheme.ND_NUM]
    if not schemes:
        schemes = [Scheme.ND_NUM]

    fig, axes = plt.subplots(
        len(schemes), 1,
        figsize=(5.0, 3.2 * len(schemes)),
        squeeze=False,
        constrained_layout=True,
    )
    index = {(row["l_r"], row["d_r"]): row for row in rows}
    for ax, scheme in zip(axes[:, 0], schemes):
        grid = np.array([
            [index[(l, d)]["ratios"][scheme] for l in l_values] for d in d_values
        ])
        mesh = ax.pcolormesh(l_values, d_values, grid, shading="nearest",
                             vmin=0.0, vmax=1.0, cmap="viridis")
        ax.set_xlabel("l_r [m]")
        ax.set_ylabel("d_r [m]")
        ax.set_title(f"rate ratio {scheme.value} / nd_num")
        fig.colorbar(mesh, ax=ax)
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_ccdf(samples: dict, path: str) -> None:
    fig, ax = plt.subplots(figsize=(5.5, 4.0), constrained_layout=True)
    for scheme, rates in samples.items():
        values, survival = survival_curve(rates)
        ax.step(values[::-1], survival[::-1], where="post", label=scheme.value)
    ax.set_xlabel("rate [bits/s/Hz]")
    ax.set_ylabel("fraction of scenarios with at least this rate")
    ax.set_ylim(0.0, 1.02)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.savefig(path, dpi=150)
    plt.close(fig)
