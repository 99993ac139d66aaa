"""Figures for the benchmark report, written to files next to the TSV output."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_bench(rows, path, message_shape=None):
    """PSNR against cover side: measured mean, half-change model, and reference values."""
    sides = [r.cover_side for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(sides, [r.analytic_psnr for r in rows], "-", color="0.5", label="half-change model")
    ax.plot(sides, [r.mean_psnr for r in rows], "o", color="tab:blue", label="measured mean")
    ref = [(r.cover_side, r.reference_psnr) for r in rows if r.reference_psnr is not None]
    if ref:
        ax.plot(*zip(*ref), "x", color="tab:red", markersize=8, label="published")
    ax.set_xlabel("cover side (pixels)")
    ax.set_ylabel("PSNR (dB)")
    if message_shape:
        ax.set_title("%dx%d message" % tuple(message_shape))
    ax.grid(True, alpha=0.3)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
