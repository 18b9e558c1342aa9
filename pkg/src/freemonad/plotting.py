"""Figures for cohomology tables, written straight to image files."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .cohomology import CohomologyTable  # noqa: E402


def plot_table(t: CohomologyTable, path, title: str | None = None, log_scale: bool = True):
    """Grid of h^i(E(d)): one row per i (h^0 at the top), one column per d."""
    data = np.array(t.rows, dtype=float)
    shade = np.log1p(data) if log_scale else data
    ncols = t.hi - t.lo + 1
    fig, ax = plt.subplots(figsize=(max(4.0, 0.55 * ncols + 1.5), 0.55 * (t.n + 1) + 1.4))
    ax.imshow(shade, cmap="Blues", aspect="auto", vmin=0, vmax=max(shade.max(), 1e-9) * 1.4)
    for i in range(t.n + 1):
        for k, d in enumerate(t.degrees):
            v = t.rows[i][k]
            ax.text(k, i, str(v) if v else ".", ha="center", va="center", fontsize=9,
                    color="black" if v else "0.55")
    ax.set_xticks(range(ncols))
    ax.set_xticklabels([str(d) for d in t.degrees])
    ax.set_yticks(range(t.n + 1))
    ax.set_yticklabels([f"$h^{i}$" for i in range(t.n + 1)])
    ax.set_xlabel("twist d")
    ax.set_title(title or f"cohomology table on $\\mathbb{{P}}^{t.n}$")
    ax.set_xticks(np.arange(-0.5, ncols, 1), minor=True)
    ax.set_yticks(np.arange(-0.5, t.n + 1, 1), minor=True)
    ax.grid(which="minor", color="white", linewidth=1.5)
    ax.tick_params(which="minor", length=0)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_certificate(cert, path):
    """Restriction table next to the expected E ⊕ A table."""
    tR, tX = cert.tables["restriction"], cert.tables["expected"]
    fig, axes = plt.subplots(1, 2, figsize=(2 * max(4.0, 0.55 * (tR.hi - tR.lo + 1) + 1.5),
                                            0.55 * (tR.n + 1) + 1.6))
    for ax, t, name in zip(axes, (tR, tX), ("restriction of the extension", "E + added line bundles")):
        data = np.log1p(np.array(t.rows, dtype=float))
        ax.imshow(data, cmap="Greens", aspect="auto", vmin=0, vmax=max(data.max(), 1e-9) * 1.4)
        for i in range(t.n + 1):
            for k in range(t.hi - t.lo + 1):
                v = t.rows[i][k]
                ax.text(k, i, str(v) if v else ".", ha="center", va="center", fontsize=8)
        ax.set_xticks(range(t.hi - t.lo + 1))
        ax.set_xticklabels([str(d) for d in t.degrees])
        ax.set_yticks(range(t.n + 1))
        ax.set_yticklabels([f"$h^{i}$" for i in range(t.n + 1)])
        ax.set_title(name, fontsize=10)
    fig.suptitle(f"{cert.steps}-step extension: {cert.verdict}")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path
