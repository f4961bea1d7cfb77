"""Figure scripts over ugwspectra CLI outputs.

Three figure kinds: log-scale count histograms of eigenvalues (single or
contrasting pair), the q(c) branch locus with its pitchfork point, and a
normalized spectrum histogram under the regular-tree limiting curve. All
inputs are CSV files written by the ``ugwspectra`` tool; this package
draws and never computes.
"""

from .density_overlay import OverlayResult, plot_density_overlay
from .io import EmptyInput, FigplotsError, SchemaError
from .locus import BRANCH_POINT, LocusResult, plot_locus
from .log_histogram import HistogramResult, plot_log_histogram

__version__ = "0.1.0"

__all__ = [
    "BRANCH_POINT",
    "EmptyInput",
    "FigplotsError",
    "HistogramResult",
    "LocusResult",
    "OverlayResult",
    "SchemaError",
    "plot_density_overlay",
    "plot_locus",
    "plot_log_histogram",
    "__version__",
]
