"""Reporting package: comparison tables and charts of evaluation results."""

from .report_generator import ReportGenerator, pick_best_models

__all__ = ["ReportGenerator", "pick_best_models"]
