from collections.abc import Sequence

from src.app_config import AppConfig
from src.models.bench import EvalResult

from .base import ChartGenerator


class IdVsOodChartGenerator(ChartGenerator):
    """Scatter of clean test accuracy against average shifted-set accuracy.

    Individual models are drawn as small gray points, soups as larger colored
    markers labelled with their row name.
    """

    def generate(
        self,
        results: Sequence[EvalResult],
        filename: str = AppConfig.REPORTING_CHART_FILENAME,
    ) -> str:
        """Render the chart and return the PNG path.

        Raises:
            ValueError: no result has a shift suite
        """
        points = [r for r in results if r.shift_accs]
        if not points:
            raise ValueError("ID-vs-OOD chart needs results with shifted-set accuracies")

        fig, ax = self._setup_chart_figure()
        colors = AppConfig.REPORTING_COLORS
        styling = AppConfig.REPORTING_STYLING

        models = [r for r in points if (r.kind or "model") == "model"]
        if models:
            ax.scatter(
                [100 * r.clean_acc for r in models],
                [100 * r.avg_ood for r in models],
                s=styling["marker_size"],
                color=colors["model"],
                label="finetuned models",
                zorder=2,
            )

        for result in points:
            if (result.kind or "model") == "model":
                continue
            ax.scatter(
                [100 * result.clean_acc],
                [100 * result.avg_ood],
                s=styling["soup_marker_size"],
                color=colors.get(result.kind, colors["manifold"]),
                marker="*",
                zorder=3,
            )
            ax.annotate(
                result.label or result.kind,
                (100 * result.clean_acc, 100 * result.avg_ood),
                textcoords="offset points",
                xytext=(4, 4),
                fontsize=styling["tick_font_size"],
                color=colors["text"],
            )

        self._style_axes(ax, x_label="Clean test accuracy (%)", y_label="Avg OOD accuracy (%)")
        if models:
            ax.legend(frameon=False, fontsize=styling["tick_font_size"], loc="lower right")
        return self._save_chart(fig, filename)
