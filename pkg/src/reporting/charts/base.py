import os
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from src.app_config import AppConfig  # noqa: E402


class ChartGenerator:
    """Base class for chart generators."""

    def __init__(self, charts_dir: str):
        """Initialize chart generator.

        Args:
            charts_dir: Directory the charts are written to (created if missing)
        """
        self.charts_dir = str(charts_dir)
        os.makedirs(self.charts_dir, exist_ok=True)

    def _setup_chart_figure(
        self, figsize: tuple[float, float] = AppConfig.REPORTING_STYLING["figsize"]
    ) -> tuple[plt.Figure, plt.Axes]:
        """Initializes a Matplotlib figure and axes with a white background."""
        fig, ax = plt.subplots(figsize=figsize)
        fig.patch.set_facecolor("white")
        ax.set_facecolor("white")
        return fig, ax

    def _style_axes(
        self,
        ax: plt.Axes,
        x_label: Optional[str] = None,
        y_label: Optional[str] = None,
        grid_color: str = AppConfig.REPORTING_COLORS["grid"],
        label_color: str = AppConfig.REPORTING_COLORS["text"],
        font_size: int = AppConfig.REPORTING_STYLING["default_font_size"],
        tick_font_size: int = AppConfig.REPORTING_STYLING["tick_font_size"],
        grid_line_width: float = AppConfig.REPORTING_STYLING["grid_line_width"],
        grid_opacity: float = AppConfig.REPORTING_STYLING["grid_opacity"],
    ):
        """Applies common styling to Matplotlib axes."""
        ax.set_xlabel(x_label or "", color=label_color, fontsize=font_size)
        ax.set_ylabel(y_label or "", color=label_color, fontsize=font_size)
        ax.tick_params(axis="both", colors=label_color, labelsize=tick_font_size)
        ax.grid(
            True,
            linestyle=":",
            linewidth=grid_line_width,
            alpha=grid_opacity,
            color=grid_color,
        )
        for spine in ("top", "right"):
            ax.spines[spine].set_visible(False)
        for spine in ("bottom", "left"):
            ax.spines[spine].set_color(grid_color)

    def _save_chart(self, fig: plt.Figure, filename: str) -> str:
        """Saves the chart to a file and closes the figure."""
        fig.tight_layout()
        output_path = os.path.join(self.charts_dir, filename)
        # Fixed metadata keeps the PNG bytes reproducible
        fig.savefig(
            output_path,
            dpi=AppConfig.REPORTING_STYLING["dpi"],
            bbox_inches="tight",
            metadata={"Software": None},
        )
        plt.close(fig)
        return output_path
