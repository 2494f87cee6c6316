"""Matplotlib figures for bench reports and suite stats, rendered to files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

ENGINE_COLORS = {"snap": "#1f77b4", "baseline": "#ff7f0e"}


def _by_engine(summary: list[dict], key: str):
    instances = sorted({s["instance"] for s in summary})
    engines = sorted({s["engine"] for s in summary})
    table = {(s["instance"], s["engine"]): s for s in summary}
    data = {
        e: [table.get((i, e), {}).get(key, float("nan")) for i in instances]
        for e in engines
    }
    return instances, engines, data


def _grouped_bars(ax, instances, engines, data, log=False):
    x = np.arange(len(instances))
    width = 0.8 / max(len(engines), 1)
    for idx, engine in enumerate(engines):
        ax.bar(
            x + idx * width,
            data[engine],
            width,
            label=engine,
            color=ENGINE_COLORS.get(engine),
        )
    ax.set_xticks(x + width * (len(engines) - 1) / 2)
    ax.set_xticklabels(instances, rotation=45, ha="right", fontsize=8)
    if log:
        ax.set_yscale("log")
    ax.legend()


def plot_suite_sizes(summary: list[dict], path: Path) -> Path:
    instances, engines, data = _by_engine(summary, "suite_size_median")
    fig, ax = plt.subplots(figsize=(max(6, 0.5 * len(instances) + 2), 4))
    _grouped_bars(ax, instances, engines, data, log=True)
    ax.set_ylabel("median suite size")
    ax.set_title("Unique valid tests per suite")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_ncd(summary: list[dict], path: Path) -> Path:
    instances, engines, data = _by_engine(summary, "ncd_median")
    fig, ax = plt.subplots(figsize=(max(6, 0.5 * len(instances) + 2), 4))
    _grouped_bars(ax, instances, engines, data)
    ax.set_ylabel("median suite NCD")
    ax.set_title("Suite diversity (normalized compression distance)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_ratios(ratios: list[dict], path: Path) -> Path:
    """Sorted per-run ratio curves: baseline/snap sizes and times."""
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    for ax, key, label in (
        (axes[0], "size_ratio", "suite size ratio (baseline / snap)"),
        (axes[1], "time_ratio", "wall time ratio (baseline / snap)"),
    ):
        vals = sorted(r[key] for r in ratios if r[key] == r[key])
        ax.plot(range(len(vals)), vals, marker="o", ms=3)
        ax.axhline(1.0, color="gray", lw=0.8, ls="--")
        ax.set_yscale("log")
        ax.set_xlabel("run (sorted)")
        ax.set_ylabel(label)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_entropy_histogram(hist: list[tuple[float, float, float]], path: Path) -> Path:
    """Render an entropy_histogram() result as a bar chart."""
    lows = [b[0] for b in hist]
    widths = [b[1] - b[0] for b in hist]
    percents = [b[2] for b in hist]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(lows, percents, width=widths, align="edge", edgecolor="white")
    ax.set_xlabel("Shannon entropy of test")
    ax.set_ylabel("percentage of tests")
    ax.set_title("Suite diversity distribution")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_report_figures(report, out_dir: Path) -> list[Path]:
    out = Path(out_dir)
    paths = [plot_suite_sizes(report.summary, out / "suite_sizes.png")]
    paths.append(plot_ncd(report.summary, out / "ncd.png"))
    if report.ratios:
        paths.append(plot_ratios(report.ratios, out / "ratios.png"))
    return paths
