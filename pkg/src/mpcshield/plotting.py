"""Figures for a scenario run, written next to the text report."""

from __future__ import annotations

from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .simnet import KINDS  # noqa: E402

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
}


def shares_figure(result, path: Path) -> Path:
    ids = list(range(1, len(result.shares) + 1))
    width = 0.27
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5, 3))
        series = [("dealt", result.shares), ("received", result.received), ("final", result.final)]
        for k, (label, vals) in enumerate(series):
            if vals:
                ax.bar([i + (k - 1) * width for i in ids], vals, width, label=label)
        ax.set_xticks(ids)
        ax.set_xlabel("player id")
        ax.set_ylabel("share value")
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def rounds_figure(result, path: Path) -> Path:
    tr = result.transcript
    rounds = sorted(tr.phases)
    counts = Counter((env.round, env.kind) for env in tr.envelopes)
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5, 3))
        bottom = [0] * len(rounds)
        for kind in KINDS:
            heights = [counts[(r, kind)] for r in rounds]
            if any(heights):
                ax.bar(rounds, heights, bottom=bottom, label=kind)
                bottom = [b + h for b, h in zip(bottom, heights)]
        ax.set_xticks(rounds)
        ax.set_xticklabels([f"{r}\n{tr.phases[r]}" for r in rounds])
        ax.set_xlabel("round")
        ax.set_ylabel("messages sent")
        if rounds:
            ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def render_figures(scenario, result, outdir: Path) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    return [
        shares_figure(result, outdir / "shares.png"),
        rounds_figure(result, outdir / "rounds.png"),
    ]
