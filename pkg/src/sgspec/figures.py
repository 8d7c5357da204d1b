"""Figure rendering for the report path.

Every check can drop a PNG next to the JSON/CSV output: spectra as
complex-plane scatters, mapping checks as overlaid left/right sets,
residual-style checks as log-scale bars against the tolerance line.
"""

from __future__ import annotations

import os
from typing import List, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_FIG_SIZE = (5.0, 4.0)


def _finish(fig, path: str) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def spectrum_figure(path: str, values: Sequence[complex], title: str) -> str:
    fig, ax = plt.subplots(figsize=_FIG_SIZE)
    vals = np.asarray(list(values), dtype=complex)
    if vals.size:
        ax.scatter(vals.real, vals.imag, marker="x", color="tab:blue")
    ax.axhline(0.0, color="0.8", lw=0.6)
    ax.axvline(0.0, color="0.8", lw=0.6)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(title)
    ax.set_aspect("equal", adjustable="datalim")
    return _finish(fig, path)


def mapping_figure(path: str, per_t: List[dict], title: str) -> str:
    """Overlay the two sides of a set identity, one colour per t."""
    fig, ax = plt.subplots(figsize=_FIG_SIZE)
    colors = plt.cm.viridis(np.linspace(0.1, 0.9, max(len(per_t), 1)))
    for color, block in zip(colors, per_t):
        lhs = np.asarray([complex(re, im) for re, im in block["lhs"]], dtype=complex)
        rhs = np.asarray([complex(re, im) for re, im in block["rhs"]], dtype=complex)
        label = f"t={block['t']:.3g}"
        if lhs.size:
            ax.scatter(lhs.real, lhs.imag, facecolors="none", edgecolors=[color],
                       s=70, label=f"{label} lhs")
        if rhs.size:
            ax.scatter(rhs.real, rhs.imag, marker="x", color=color, s=35,
                       label=f"{label} rhs")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(title)
    ax.set_aspect("equal", adjustable="datalim")
    if per_t:
        ax.legend(fontsize=7, ncols=2)
    return _finish(fig, path)


def residual_figure(path: str, labels: Sequence[str], values: Sequence[float],
                    tol: float, title: str) -> str:
    fig, ax = plt.subplots(figsize=_FIG_SIZE)
    vals = np.asarray(list(values), dtype=float)
    floor = 1e-18
    ax.bar(range(len(vals)), np.maximum(vals, floor), color="tab:blue")
    ax.axhline(tol, color="tab:red", ls="--", lw=1.0, label=f"tol = {tol:g}")
    ax.set_yscale("log")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=7)
    ax.set_ylabel("defect")
    ax.set_title(title)
    ax.legend(fontsize=8)
    return _finish(fig, path)


def projection_figure(path: str, ns: Sequence[int], ranks: Sequence[int],
                      title: str) -> str:
    fig, ax = plt.subplots(figsize=_FIG_SIZE)
    ax.bar(list(ns), list(ranks), color="tab:blue", width=0.6)
    ax.set_xlabel("lattice index n")
    ax.set_ylabel("rank of P_n")
    ax.set_title(title)
    ax.set_xticks(list(ns))
    return _finish(fig, path)


def figure_path(directory: str, check_id: str) -> str:
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, f"{check_id}.png")
