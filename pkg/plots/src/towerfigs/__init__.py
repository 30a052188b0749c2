"""Figure rendering for block-tower planner benchmark results.

Everything here consumes the flat delimited trial export (one CSV row per
trial, stable documented column order) and nothing else: no planner code is
imported, and figures are rendered headlessly, so identical CSV input yields
identical figures.
"""

from .figures import (
    KINDS,
    PlotSpec,
    plot_decompositions,
    plot_lambda_sweep,
    plot_success_vs_cost,
    render,
)
from .records import MissingColumn, apply_filters, load_rows

__all__ = [
    "KINDS",
    "MissingColumn",
    "PlotSpec",
    "apply_filters",
    "load_rows",
    "plot_decompositions",
    "plot_lambda_sweep",
    "plot_success_vs_cost",
    "render",
]
