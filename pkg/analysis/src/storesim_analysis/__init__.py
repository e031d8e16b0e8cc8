"""Post-processing for storesim sweep outputs.

Consumes the simulator's documented file formats (summary.json, daily.csv,
cells.csv) and produces descriptive tables, Welch t / one-way ANOVA reports
with eta-squared effect sizes, and daily time-series figures.
"""

from .compare import compare
from .loading import CellResults, ResultsError, load_cells_csv, load_results, parse_cell_id
from .plots import plot_daily
from .summarize import summarize, to_markdown_table, verify_against_cells_csv

__version__ = "0.1.0"

__all__ = [
    "CellResults",
    "ResultsError",
    "compare",
    "load_cells_csv",
    "load_results",
    "parse_cell_id",
    "plot_daily",
    "summarize",
    "to_markdown_table",
    "verify_against_cells_csv",
    "__version__",
]
