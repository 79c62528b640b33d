"""Figure generation for linepack result directories."""
from .figures import compose, pairwise_spread, save
from .reader import (
    BC_KINDS,
    VARIANTS,
    KindBundle,
    PlotviewError,
    VariantSeries,
    read_metrics,
    read_results,
    read_series,
)

__version__ = "0.1.0"

__all__ = [
    "BC_KINDS",
    "VARIANTS",
    "KindBundle",
    "PlotviewError",
    "VariantSeries",
    "compose",
    "pairwise_spread",
    "read_metrics",
    "read_results",
    "read_series",
    "save",
]
