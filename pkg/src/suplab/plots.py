"""Report figures: rendered PNGs written next to their per-figure CSVs."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .evaluate import ExperimentReport
from .supro import MODES

_METRICS = ("precision", "recall", "f1")


def write_method_comparison(report: ExperimentReport, out_dir: Path) -> list[Path]:
    """Per-mode metrics for each method: methods.csv + methods.png."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "methods.csv"
    rows = []
    for name, outcome in report.methods.items():
        m = outcome.metrics()
        for mode in MODES:
            rows.append([name, mode, m.precision[mode], m.recall[mode], m.f1[mode]])
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "mode", "precision", "recall", "f1"])
        writer.writerows(rows)

    fig, axes = plt.subplots(1, len(report.methods), figsize=(5 * len(report.methods), 3.2), sharey=True)
    if len(report.methods) == 1:
        axes = [axes]
    width = 0.25
    xs = np.arange(len(MODES))
    for ax, (name, outcome) in zip(axes, report.methods.items()):
        m = outcome.metrics()
        for i, metric in enumerate(_METRICS):
            vals = [getattr(m, metric)[mode] for mode in MODES]
            ax.bar(xs + (i - 1) * width, vals, width, label=metric)
        ax.set_xticks(xs, MODES)
        ax.set_ylim(0, 1.05)
        ax.set_title(name.upper())
        ax.grid(axis="y", alpha=0.3)
    axes[0].set_ylabel("score")
    axes[-1].legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    png_path = out_dir / "methods.png"
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [csv_path, png_path]


def write_intensity_breakdown(report: ExperimentReport, out_dir: Path, method: str = "omicc") -> list[Path]:
    """Metric vs mode within each usage intensity: intensity.csv + intensity.png."""
    if not report.per_intensity:
        return []
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "intensity.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "intensity", "mode", "precision", "recall", "f1"])
        for intensity, outcomes in report.per_intensity.items():
            for name, outcome in outcomes.items():
                m = outcome.metrics()
                for mode in MODES:
                    writer.writerow(
                        [name, intensity, mode, m.precision[mode], m.recall[mode], m.f1[mode]]
                    )

    intensities = list(report.per_intensity)
    fig, axes = plt.subplots(1, len(intensities), figsize=(4 * len(intensities), 3.2), sharey=True)
    if len(intensities) == 1:
        axes = [axes]
    width = 0.25
    xs = np.arange(len(MODES))
    for ax, intensity in zip(axes, intensities):
        m = report.per_intensity[intensity][method].metrics()
        for i, metric in enumerate(_METRICS):
            vals = [getattr(m, metric)[mode] for mode in MODES]
            ax.bar(xs + (i - 1) * width, vals, width, label=metric)
        ax.set_xticks(xs, MODES)
        ax.set_ylim(0, 1.05)
        ax.set_title(f"{intensity} intensity")
        ax.grid(axis="y", alpha=0.3)
    axes[0].set_ylabel("score")
    axes[-1].legend(loc="lower right", fontsize=8)
    fig.suptitle(f"{method.upper()} by usage intensity", fontsize=10)
    fig.tight_layout()
    png_path = out_dir / "intensity.png"
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [csv_path, png_path]


def write_sweep(tables: dict[str, dict[int, float]], out_dir: Path) -> list[Path]:
    """Detected-count vs reference size: sweep.csv + sweep.png."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "sweep.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["appliance", "n", "mean_detected"])
        for appliance, table in tables.items():
            for n in sorted(table):
                writer.writerow([appliance, n, table[n]])

    fig, ax = plt.subplots(figsize=(5.5, 3.2))
    for appliance, table in tables.items():
        ns = sorted(table)
        ax.plot(ns, [table[n] for n in ns], marker="o", label=appliance)
    ax.set_xlabel("reference pattern size (samples)")
    ax.set_ylabel("mean detected usages")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    png_path = out_dir / "sweep.png"
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [csv_path, png_path]
