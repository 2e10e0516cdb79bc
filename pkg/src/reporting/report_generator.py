"""Comparison tables of evaluation results (best model, soups, variants)."""

import json
import math
from collections.abc import Sequence
from pathlib import Path
from typing import Any, Optional

import pandas as pd

from src.app_config import AppConfig
from src.exceptions import SchemaMismatchError
from src.models.bench import EvalResult
from src.models.enums import ReportFormat
from src.utils.file_utils import ensure_dir, save_json_to_file
from src.utils.logging_utils import SoupLogger

from .charts.id_vs_ood import IdVsOodChartGenerator

CLEAN_COLUMN = "Clean"
AVG_OOD_COLUMN = "Avg OOD"
DELTA_COLUMN = "Δ Avg OOD"


class ReportGenerator:
    """Builds the comparison table of a set of evaluation results.

    Rows keep the order of `results`. Columns are the clean test accuracy,
    every shifted test set in suite order and the Avg OOD mean; the best and
    second-best value of each column are marked in markdown. With a
    `reference_label`, every row also gets its signed Avg OOD difference to
    that row in percentage points.
    """

    def __init__(self, results: Sequence[EvalResult], reference_label: Optional[str] = None):
        if not results:
            raise ValueError("report needs at least one evaluation result")
        self.results = list(results)
        self.reference_label = reference_label
        self.logger = SoupLogger(__name__)
        self.shift_ids = list(self.results[0].shift_accs)
        for result in self.results[1:]:
            if list(result.shift_accs) != self.shift_ids:
                raise SchemaMismatchError(
                    f"result '{result.label}' covers shifts {list(result.shift_accs)}, "
                    f"expected {self.shift_ids}"
                )
        labels = [self._row_label(i) for i in range(len(self.results))]
        if len(set(labels)) != len(labels):
            raise ValueError(f"report row labels must be unique, got {labels}")
        if reference_label is not None and reference_label not in labels:
            raise ValueError(f"reference row '{reference_label}' not among {labels}")

    def _row_label(self, index: int) -> str:
        return self.results[index].label or f"row {index + 1}"

    @property
    def value_columns(self) -> list[str]:
        columns = [CLEAN_COLUMN, *self.shift_ids]
        if self.shift_ids:
            columns.append(AVG_OOD_COLUMN)
        return columns

    def build_table(self) -> pd.DataFrame:
        """Accuracy fractions, one row per result."""
        rows = []
        for index, result in enumerate(self.results):
            row: dict[str, Any] = {"Method": self._row_label(index), CLEAN_COLUMN: result.clean_acc}
            row.update(result.shift_accs)
            if self.shift_ids:
                row[AVG_OOD_COLUMN] = result.avg_ood
            rows.append(row)
        return pd.DataFrame(rows, columns=["Method", *self.value_columns])

    def avg_ood_deltas(self) -> dict[str, float]:
        """Signed Avg OOD difference to the reference row, in percentage points."""
        if self.reference_label is None or not self.shift_ids:
            return {}
        table = self.build_table().set_index("Method")
        reference = table.loc[self.reference_label, AVG_OOD_COLUMN]
        return {
            label: 100.0 * (value - reference)
            for label, value in table[AVG_OOD_COLUMN].items()
        }

    # ===== Rendering =====

    @staticmethod
    def _mark_column(values: pd.Series) -> pd.Series:
        """Format as percentages, marking the best and second-best distinct values."""
        decimals = AppConfig.REPORTING_PERCENT_DECIMALS
        percents = (100.0 * values).round(decimals)
        distinct = sorted(set(percents), reverse=True)
        best = distinct[0]
        second = distinct[1] if len(distinct) > 1 else None

        def fmt(p: float) -> str:
            text = f"{p:.{decimals}f}"
            if p == best:
                return f"{AppConfig.REPORTING_BEST_MARK}{text}{AppConfig.REPORTING_BEST_MARK}"
            if second is not None and p == second:
                return f"{AppConfig.REPORTING_SECOND_MARK}{text}{AppConfig.REPORTING_SECOND_MARK}"
            return text

        return percents.apply(fmt)

    def _df_to_markdown(self, df: pd.DataFrame) -> str:
        """Convert the accuracy table to a marked markdown table."""
        formatted_df = df.copy()
        for col in self.value_columns:
            formatted_df[col] = self._mark_column(df[col])

        deltas = self.avg_ood_deltas()
        if deltas:
            formatted_df[DELTA_COLUMN] = [f"{deltas[label]:+.2f}" for label in df["Method"]]

        colalign = ["left"] + ["right"] * (len(formatted_df.columns) - 1)
        return formatted_df.to_markdown(index=False, colalign=colalign, disable_numparse=True)

    def render_markdown(self, title: str = "Soup comparison") -> str:
        lines = [f"# {title}", "", self._df_to_markdown(self.build_table()), ""]
        lines.append(
            "Accuracies in %. Best per column in bold, second best in italics."
            + (f" {AVG_OOD_COLUMN} is the unweighted mean of the shift columns." if self.shift_ids else "")
        )
        deltas = self.avg_ood_deltas()
        if deltas:
            lines.append(
                f"{DELTA_COLUMN}: percentage points relative to '{self.reference_label}'."
            )
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict[str, Any]:
        deltas = self.avg_ood_deltas()
        rows = []
        for index, result in enumerate(self.results):
            label = self._row_label(index)
            row: dict[str, Any] = {
                "label": label,
                "kind": result.kind,
                "val_acc": result.val_acc,
                "clean_acc": result.clean_acc,
                "shift_accs": dict(result.shift_accs),
            }
            if self.shift_ids:
                row["avg_ood"] = result.avg_ood
            if deltas:
                row["delta_avg_ood_pp"] = deltas[label]
            rows.append(row)
        return {
            "columns": self.value_columns,
            "reference": self.reference_label,
            "rows": rows,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def save(self, out_dir: Path, report_format: ReportFormat = ReportFormat.MARKDOWN) -> str:
        """Write report.md or report.json into `out_dir` and return its path."""
        out_dir = ensure_dir(out_dir)
        if report_format is ReportFormat.JSON:
            path = save_json_to_file(self.to_dict(), out_dir / AppConfig.REPORTING_JSON_FILENAME)
        else:
            path = out_dir / AppConfig.REPORTING_TABLE_FILENAME
            path.write_text(self.render_markdown(), encoding="utf-8")
            path = str(path)
        self.logger.info(f"Report written to {path}")
        return path

    def save_chart(self, out_dir: Path, filename: str = AppConfig.REPORTING_CHART_FILENAME) -> Optional[str]:
        """Render the ID-vs-OOD scatter; returns None when there are no shifts."""
        if not self.shift_ids:
            return None
        return IdVsOodChartGenerator(str(out_dir)).generate(self.results, filename)


def pick_best_models(results: Sequence[EvalResult]) -> list[EvalResult]:
    """Individual models ordered by validation accuracy, best first (stable on ties)."""
    models = [r for r in results if (r.kind or "model") == "model"]
    return sorted(
        models,
        key=lambda r: -math.inf if r.val_acc is None else r.val_acc,
        reverse=True,
    )
