"""Chart generators for soup experiment results."""

from .base import ChartGenerator
from .id_vs_ood import IdVsOodChartGenerator

__all__ = ["ChartGenerator", "IdVsOodChartGenerator"]
