"""The three figure families rendered from the CSV trial export.

All functions take loaded rows and return a matplotlib Figure; file output is
the CLI's job. The Agg backend is forced so rendering never needs a display.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.colors import LinearSegmentedColormap

from .records import (
    apply_filters,
    decomposition_heights,
    fnum,
    has_columns,
    load_rows,
    mean,
    require_columns,
)

MARKERS = ("o", "s", "^", "D", "v", "P", "X", "*")

# stripe segments shade from blue (first subgoal) to orange (eighth)
ORDINAL_CMAP = LinearSegmentedColormap.from_list(
    "subgoal-ordinal", ["#1f77b4", "#ff7f0e"], N=8)

SWEEP_METRICS = ("action_cost", "success", "n_subgoals", "selection_cost",
                 "blocks_used")
SWEEP_TITLES = ("action planning cost", "reconstruction rate", "subgoals used",
                "subgoal planning cost", "blocks used")


def _groups(rows, key_columns):
    require_columns(rows, key_columns)
    keys = sorted({tuple(r[c] for c in key_columns) for r in rows})
    return [(k, [r for r in rows if tuple(r[c] for c in key_columns) == k])
            for k in keys]


def plot_success_vs_cost(rows: list[dict[str, str]]) -> plt.Figure:
    """Two panels: action/selection cost against reconstruction rate, one
    marker per (planner, llp). Interval columns, when present, become error
    bars; otherwise plain per-group means are drawn and a warning notes it.
    """
    if not rows:
        raise ValueError("no rows to plot")
    require_columns(rows, ("success", "action_cost", "selection_cost"))
    groups = _groups(rows, ("planner", "llp"))
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 4.0), sharey=True)
    for ax, metric, title in zip(axes, ("action_cost", "selection_cost"),
                                 ("action planning cost", "subgoal planning cost")):
        bounds = (f"{metric}_lo", f"{metric}_hi")
        with_bars = has_columns(rows, bounds)
        if not with_bars:
            warnings.warn(f"no {bounds[0]}/{bounds[1]} columns; "
                          "error bars omitted", stacklevel=2)
        for i, ((planner, llp), group) in enumerate(groups):
            x = mean(fnum(r, metric) for r in group)
            y = mean(fnum(r, "success") for r in group)
            xerr = None
            if with_bars:
                lo = mean(fnum(r, bounds[0]) for r in group)
                hi = mean(fnum(r, bounds[1]) for r in group)
                xerr = [[max(x - lo, 0.0)], [max(hi - x, 0.0)]]
            ax.errorbar(x, y, xerr=xerr, fmt=MARKERS[i % len(MARKERS)],
                        capsize=0, label=f"{planner}/{llp}")
        ax.set_xscale("symlog")
        ax.set_xlabel(f"{title} (states)")
        ax.grid(True, alpha=0.3)
    axes[0].set_ylabel("reconstruction rate")
    axes[0].legend(fontsize=8)
    fig.tight_layout()
    return fig


def plot_decompositions(rows: list[dict[str, str]]) -> plt.Figure:
    """One vertical stripe per trial, stacked segments colored by subgoal
    ordinal, stripes grouped by structure and ordered by (planner, llp,
    lambda, seed) within each group.
    """
    if not rows:
        raise ValueError("no rows to plot")
    require_columns(rows, ("structure", "planner", "llp", "lambda", "seed",
                           "decomposition"))
    ordered = sorted(rows, key=lambda r: (r["structure"], r["planner"],
                                          r["llp"], float(r["lambda"]),
                                          int(r["seed"])))
    fig, ax = plt.subplots(figsize=(max(6.0, 0.18 * len(ordered)), 4.0))
    x = 0
    tick_pos, tick_label = [], []
    group_start = 0
    current = ordered[0]["structure"]
    for i, row in enumerate(ordered):
        if row["structure"] != current:
            tick_pos.append((group_start + x - 1) / 2)
            tick_label.append(current)
            current = row["structure"]
            x += 1  # gap between structure groups
            group_start = x
        bottom = 0
        for ordinal, height in enumerate(decomposition_heights(row)):
            ax.bar(x, height - bottom, bottom=bottom, width=0.9,
                   color=ORDINAL_CMAP(min(ordinal, 7)))
            bottom = height
        x += 1
    tick_pos.append((group_start + x - 1) / 2)
    tick_label.append(current)
    ax.set_xticks(tick_pos, tick_label)
    ax.set_ylabel("layer height reached")
    ax.set_xlabel("structure")
    fig.tight_layout()
    return fig


def plot_lambda_sweep(rows: list[dict[str, str]]) -> plt.Figure:
    """Five panels of per-lambda means (action cost, success, subgoal count,
    selection cost, blocks used), one line per action-level search algorithm.
    """
    if not rows:
        raise ValueError("no rows to plot")
    require_columns(rows, ("lambda", "llp") + SWEEP_METRICS)
    fig, axes = plt.subplots(1, len(SWEEP_METRICS), figsize=(16.0, 3.2))
    for ax, metric, title in zip(axes, SWEEP_METRICS, SWEEP_TITLES):
        for (llp,), group in _groups(rows, ("llp",)):
            lams = sorted({float(r["lambda"]) for r in group})
            ys = [mean(fnum(r, metric) for r in group
                       if float(r["lambda"]) == lam) for lam in lams]
            ax.plot(lams, ys, marker="o", markersize=3, label=llp)
        ax.set_title(title, fontsize=9)
        ax.set_xlabel("lambda")
        ax.grid(True, alpha=0.3)
    axes[0].legend(fontsize=8)
    fig.tight_layout()
    return fig


KINDS = {
    "scatter": plot_success_vs_cost,
    "stripes": plot_decompositions,
    "sweep": plot_lambda_sweep,
}


@dataclass(frozen=True)
class PlotSpec:
    """A single figure request: what to read, what to draw, where to write."""

    input: Path
    kind: str
    output: Path
    filters: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; "
                             f"expected one of {sorted(KINDS)}")


def render(spec: PlotSpec) -> plt.Figure:
    """Load, filter, draw, and write one figure; returns the Figure."""
    rows = apply_filters(load_rows(spec.input), spec.filters)
    if not rows:
        raise ValueError("no rows match the given filters")
    fig = KINDS[spec.kind](rows)
    fig.savefig(spec.output, dpi=150)
    return fig
