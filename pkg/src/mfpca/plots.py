"""
Figure rendering for experiment reports.

Rendered to files next to the CSV output: a per-method PSNR summary for
reconstruction runs and log-log timing curves for the benchmark.  The
CSV remains the canonical machine-readable interface; these are the
human-readable companions.
"""

import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from . import imaging

__all__ = ["psnr_summary_figure", "timing_figure", "render_report_figures"]

_METHOD_LABEL = {
    "l2": "$\\ell_2$-PCA",
    "mf": "MF-$\\ell_1$-PCA",
    "min1": "min-$\\ell_1$-PCA-1",
    "min2": "min-$\\ell_1$-PCA-2",
}


def psnr_summary_figure(results):
    """Mean reconstruction PSNR per method (bar), noisy baseline dashed."""
    by_method = defaultdict(list)
    noisy = []
    for r in results:
        by_method[r.method.value].append(imaging.cap_psnr(r.psnr_reconstructed_db))
        noisy.append(imaging.cap_psnr(r.psnr_noisy_db))
    methods = list(by_method)
    means = [float(np.mean(by_method[m])) for m in methods]
    spreads = [float(np.std(by_method[m])) for m in methods]

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(
        range(len(methods)),
        means,
        yerr=spreads,
        capsize=4,
        color="#4878d0",
        edgecolor="black",
    )
    if noisy:
        ax.axhline(
            float(np.mean(noisy)), color="gray", linestyle="--", label="noisy input"
        )
        ax.legend()
    ax.set_xticks(range(len(methods)))
    ax.set_xticklabels([_METHOD_LABEL.get(m, m) for m in methods])
    ax.set_ylabel("PSNR (dB)")
    ax.set_title("Reconstruction quality by kernel")
    fig.tight_layout()
    return fig


def timing_figure(rows):
    """Covariance+eigen seconds vs image side length, one line per method."""
    series = defaultdict(list)
    for r in rows:
        series[r["method"]].append((r["size"], r["total_seconds"]))

    fig, ax = plt.subplots(figsize=(6, 4))
    for method, pts in series.items():
        pts.sort()
        sizes = [p[0] for p in pts]
        secs = [p[1] for p in pts]
        ax.plot(sizes, secs, marker="o", label=_METHOD_LABEL.get(method, method))
    ax.set_xlabel("image side (pixels)")
    ax.set_ylabel("covariance + eigendecomposition (s)")
    ax.set_yscale("log")
    ax.set_title("Dense-route cost by kernel")
    ax.legend()
    fig.tight_layout()
    return fig


def render_report_figures(out_dir, results=None, timing_rows=None):
    """Write whichever figures apply; returns the list of files written."""
    written = []
    if results:
        fig = psnr_summary_figure(results)
        path = os.path.join(out_dir, "psnr_summary.png")
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    if timing_rows:
        fig = timing_figure(timing_rows)
        path = os.path.join(out_dir, "timing.png")
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written
