"""Figure rendering for report-producing commands.

Each helper writes one PNG next to the delimited output; figures are a
convenience view of the same numbers, never a data source.
"""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, out_dir: str, name: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def exponent_fit_figure(report, out_dir: str) -> str:
    """Log-log scatter of psi over the grid with fitted and predicted lines."""
    x = np.log10(report.n_grid)
    y = np.log10(report.psi_values)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(x, y, "o", color="tab:blue", label="measured")
    coef = np.polyfit(x, y, 1)
    xs = np.linspace(x.min() if hasattr(x, "min") else min(x), max(x), 50)
    ax.plot(xs, np.polyval(coef, xs), "-", color="tab:blue",
            label=f"fit slope {report.fitted_slope:.4f}")
    if report.predicted_slope is not None:
        anchor = np.polyval(coef, xs[0])
        ax.plot(xs, anchor + report.predicted_slope * (xs - xs[0]), "--",
                color="tab:red",
                label=f"predicted {report.predicted_slope:.4f}")
    ax.set_xlabel("log10 grid value")
    ax.set_ylabel("log10 psi")
    ax.set_title(f"{report.family.name}: {report.graph.edge_string()}")
    ax.legend(fontsize=8)
    name = f"fit_{report.family.name}_{report.graph.n}v{report.graph.edge_count}e.png"
    return _save(fig, out_dir, name)


def dominance_figure(rows, family_name: str, n: int, threshold: float,
                     out_dir: str) -> str:
    """Bar chart of psi * sqrt(n) per candidate shape."""
    labels = [r.graph.edge_string() for r in rows]
    vals = [r.psi_sqrt_n for r in rows]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    colors = ["tab:green" if r.above_threshold else "tab:gray" for r in rows]
    ax.bar(range(len(rows)), vals, color=colors)
    ax.axhline(threshold, color="tab:red", linestyle="--", linewidth=1)
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=7)
    ax.set_ylabel("psi * sqrt(n)")
    ax.set_title(f"{family_name} at n={n}")
    return _save(fig, out_dir, f"dominance_{family_name}_n{n}.png")


def power_figure(report, name: str, out_dir: str) -> str:
    """Histograms of the signed count under both hypotheses, with threshold."""
    fig, ax = plt.subplots(figsize=(5.5, 3.5))
    if report.null_values is not None:
        ax.hist(report.null_values, bins=30, alpha=0.6, label="null",
                color="tab:gray")
    if report.planted_values is not None:
        ax.hist(report.planted_values, bins=30, alpha=0.6, label="planted",
                color="tab:orange")
    if math.isfinite(report.threshold):
        ax.axvline(report.threshold, color="tab:red", linestyle="--",
                   label="threshold")
    ax.set_xlabel("signed count")
    ax.set_ylabel("trials")
    ax.set_title(f"{name}: type1={report.type1_rate:.3f} "
                 f"type2={report.type2_rate:.3f}")
    ax.legend(fontsize=8)
    return _save(fig, out_dir, f"power_{name}.png")


def ratio_figure(report, name: str, out_dir: str) -> str:
    """Histogram of per-trial worst ratios from a verification run."""
    ratios = [r for r in (report.trial_ratios or ()) if math.isfinite(r) and r > 0]
    fig, ax = plt.subplots(figsize=(5.5, 3.5))
    if ratios:
        ax.hist(np.log10(ratios), bins=40, color="tab:blue")
    if math.isfinite(report.constant_bound_used):
        ax.axvline(np.log10(report.constant_bound_used), color="tab:red",
                   linestyle="--", label="bound")
        ax.legend(fontsize=8)
    ax.set_xlabel("log10 worst ratio per trial")
    ax.set_ylabel("trials")
    ax.set_title(f"{name}: worst={report.worst_ratio:.6g} "
                 f"violations={report.violations}")
    return _save(fig, out_dir, f"ratios_{name}.png")
