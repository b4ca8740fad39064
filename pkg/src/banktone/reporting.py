"""Delimited report tables and vector-graphics figures.

Everything here is deterministic on purpose: fixed float formatting,
stable column order, SVG output with a pinned hash salt and no embedded
timestamps, so repeated runs of an unchanged configuration are
byte-identical.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

plt.rcParams["svg.hashsalt"] = "banktone"

FLOAT_FORMAT = ".12g"
MISSING = "NA"


def format_cell(value) -> str:
    if value is None:
        return MISSING
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    v = float(value)
    if math.isnan(v):
        return MISSING
    return format(v, FLOAT_FORMAT)


def write_table(path, columns: Sequence[str], rows: Iterable[Sequence],
                digest: str, units: str) -> int:
    """Write a comment-headed delimited table; returns the data row count."""
    path = Path(path)
    lines = [f"# config_digest={digest}", f"# units: {units}",
             ",".join(columns)]
    count = 0
    for row in rows:
        lines.append(",".join(format_cell(cell) for cell in row))
        count += 1
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return count


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _month_ticks(ax, labels: Sequence[str], step: int = 12):
    ticks = list(range(0, len(labels), step))
    ax.set_xticks(ticks)
    ax.set_xticklabels([labels[i] for i in ticks], rotation=45, ha="right",
                       fontsize=8)


def plot_gap_over_time(path, month_labels: Sequence[str],
                       gaps: dict[str, Sequence[float]]):
    """One line per method: monthly gap between realized and fitted inflation."""
    fig, ax = plt.subplots(figsize=(9, 4.5))
    for method in gaps:
        ax.plot(range(len(month_labels)), gaps[method], label=method,
                linewidth=1.2)
    ax.axhline(0.0, color="black", linewidth=0.6)
    _month_ticks(ax, month_labels)
    ax.set_ylabel("inflation gap")
    ax.set_title("Gap between realized and bounded-model inflation")
    ax.legend(fontsize=8, ncol=2)
    fig.tight_layout()
    _save(fig, path)


def plot_matched_extrema(path, month_labels: Sequence[str],
                         x_values: Sequence[float], y_values: Sequence[float],
                         pairs: Sequence[tuple[int, int]],
                         band_label: str, x_name: str, y_name: str):
    """Two band-reconstructed curves with connectors at matched minima."""
    fig, ax = plt.subplots(figsize=(9, 4.5))
    ax.plot(range(len(x_values)), x_values, label=x_name, linewidth=1.4)
    ax.plot(range(len(y_values)), y_values, label=y_name, linewidth=1.4)
    for tx, ty in pairs:
        ax.plot([tx, ty], [x_values[tx], y_values[ty]], color="gray",
                linestyle="--", linewidth=0.9)
        ax.plot([tx], [x_values[tx]], marker="v", color="tab:blue")
        ax.plot([ty], [y_values[ty]], marker="v", color="tab:orange")
    _month_ticks(ax, month_labels)
    ax.set_title(f"Matched minima, {band_label} band")
    ax.legend(fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def plot_leadlag_bars(path, band_labels: Sequence[str],
                      values: dict[tuple[str, str], float | None],
                      metric_name: str):
    """Grouped bars of per-band lead-lag distance for minima and maxima."""
    fig, ax = plt.subplots(figsize=(7, 4))
    width = 0.35
    for offset, kind in ((-width / 2, "minima"), (width / 2, "maxima")):
        heights = [values.get((band, kind)) or 0.0 for band in band_labels]
        ax.bar([i + offset for i in range(len(band_labels))], heights, width,
               label=kind)
    ax.set_xticks(range(len(band_labels)))
    ax.set_xticklabels(band_labels)
    ax.set_ylabel(f"{metric_name} distance (months)")
    ax.set_title("Lead-lag distance by spectral band")
    ax.legend(fontsize=8)
    fig.tight_layout()
    _save(fig, path)
