"""Figure rendering for the CLI report paths."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .protocol import OUTCOME_ORDER  # noqa: E402


def plot_figure2(points, path):
    """Render the fidelity-vs-decoherence comparison to an image file.

    Standard scheme dashed, optimal memoryless bound dash-dotted, one
    solid memory curve per correlation deviation (black for strongly
    correlated environments, grey otherwise, the usual styling for this
    plot).
    """
    kappa = [p.kappa_abs for p in points]
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.plot(kappa, [p.f_standard for p in points], "k--", label="standard")
    ax.plot(kappa, [p.f_optimal for p in points], "k-.", label="optimal memoryless")
    for dk in points[0].f_memory:
        color = "black" if dk <= 0.1 else "grey"
        ax.plot(kappa, [p.f_memory[dk] for p in points], color=color,
                label=f"memory, dK={dk:g}")
    ax.set_xlabel(r"$|\kappa_2|$")
    ax.set_ylabel("worst-case fidelity")
    ax.set_xlim(min(kappa), max(kappa))
    ax.set_ylim(0.45, 1.02)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_run_report(report, path):
    """Per-outcome probability and fidelity bars for a single run."""
    labels = [o.value for o in OUTCOME_ORDER]
    probs = [report.outcomes[o].probability for o in OUTCOME_ORDER]
    fids = [report.outcomes[o].fidelity for o in OUTCOME_ORDER]
    x = range(len(labels))
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(7.5, 3.5))
    ax1.bar(x, probs, color="steelblue")
    ax1.set_xticks(list(x), labels)
    ax1.set_ylabel("probability")
    ax1.axhline(0.25, color="k", lw=0.8, ls=":")
    ax2.bar(x, fids, color="indianred")
    ax2.set_xticks(list(x), labels)
    ax2.set_ylabel("fidelity")
    ax2.set_ylim(0.0, 1.05)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
