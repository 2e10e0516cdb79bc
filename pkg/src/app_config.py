"""Central application configuration.

This module provides a centralized configuration for the entire toolkit.
It consolidates the checkpoint format constants, soup and optimizer defaults,
bench defaults and reporting styling into a single location.
"""

import os
from dataclasses import dataclass
from pathlib import Path

from src.exceptions import ConfigurationError

PROJECT_ROOT = Path(__file__).resolve().parent.parent


class AppConfig:
    """Central application configuration.

    Flat structure with consistent prefixing to maintain organization:
    - CHECKPOINT_*: on-disk tensor format
    - SOUP_* / DFO_*: fusion algorithm and optimizer defaults
    - BENCH_*: desk-scale experiment harness
    - REPORTING_*: tables and charts
    """

    # ===== Checkpoint Format =====

    CHECKPOINT_MAGIC = b"SOUPCKPT"
    CHECKPOINT_FORMAT_VERSION = 1
    CHECKPOINT_DTYPE_TAG = "f32"
    CHECKPOINT_ALIGNMENT = 8
    CHECKPOINT_SUFFIX = ".ckpt"

    # ===== Soup Configuration =====

    SOUP_DEFAULT_TAU = 0.998  # Gate tolerance for promising candidates
    SOUP_DEFAULT_BUDGET = 250  # Objective evaluations per optimizer call
    SOUP_DEFAULT_SEED = 0
    SOUP_REPORT_FILENAME = "soup_report.json"
    SOUP_CHECKPOINT_FILENAME = "fused.ckpt"

    # ===== Optimizer Configuration =====

    DFO_DEFAULT_SOLVER = "cobyla"
    DFO_INITIAL_RADIUS = 0.25  # Initial trust-region radius
    DFO_FINAL_RADIUS = 1e-3  # Final trust-region radius
    DFO_SIMPLEX_JITTER = 0.1  # Relative jitter of the Nelder-Mead simplex edges

    # ===== Bench Configuration =====

    BENCH_CONFIG_DIR = PROJECT_ROOT / "config"
    BENCH_TASK_CONFIG = BENCH_CONFIG_DIR / "task.v1.json"
    BENCH_GRID_CONFIG = BENCH_CONFIG_DIR / "reference_grid.v1.json"
    BENCH_BUNDLE_DESCRIPTOR = "bundle.json"
    BENCH_POOL_MANIFEST = "pool.json"
    BENCH_VALIDATION_SPLIT = "val"
    BENCH_CLEAN_TEST_SPLIT = "test"
    BENCH_HEAD_RIDGE = 1e-3  # Ridge penalty of the initial head fit
    BENCH_BLOB_RADIUS = 2.5  # Class centers on a circle of this radius
    BENCH_BLOB_EXTRA_SPREAD = 0.6  # Std of class-center offsets in extra dims
    BENCH_BLOB_STD = 1.0
    BENCH_SPIRAL_TURNS = 1.5
    BENCH_SPIRAL_NOISE = 0.25

    # Component counts of the manifold soup variants run by the experiment
    BENCH_MANIFOLD_VARIANTS: list[int] = [2, 4, 8]

    # ===== Reporting Configuration =====

    REPORTING_BEST_MARK = "**"
    REPORTING_SECOND_MARK = "*"
    REPORTING_PERCENT_DECIMALS = 2
    REPORTING_TABLE_FILENAME = "report.md"
    REPORTING_JSON_FILENAME = "report.json"
    REPORTING_CHART_FILENAME = "id_vs_ood.png"

    REPORTING_COLORS = {
        "model": "#999999",  # Gray for individual finetuned models
        "uniform": "#1E88E5",  # Blue for uniform soup
        "greedy": "#2ecc71",  # Green for greedy soup
        "manifold": "#7B1F1F",  # Dark red for manifold mixing soups
        "text": "#666666",
        "grid": "#cccccc",
    }

    REPORTING_STYLING = {
        "figsize": (6.0, 4.5),
        "marker_size": 36,
        "soup_marker_size": 64,
        "default_font_size": 9,
        "tick_font_size": 8,
        "grid_line_width": 0.7,
        "grid_opacity": 0.5,
        "dpi": 150,
    }


@dataclass
class SoupSettings:
    """Runtime defaults for soups and the optimizer, overridable from the environment."""

    tau: float = AppConfig.SOUP_DEFAULT_TAU
    budget: int = AppConfig.SOUP_DEFAULT_BUDGET
    solver: str = AppConfig.DFO_DEFAULT_SOLVER
    initial_radius: float = AppConfig.DFO_INITIAL_RADIUS
    final_radius: float = AppConfig.DFO_FINAL_RADIUS

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ConfigurationError(f"SOUPKIT_TAU must lie in [0, 1], got {self.tau}")
        if self.budget < 1:
            raise ConfigurationError(f"SOUPKIT_BUDGET must be >= 1, got {self.budget}")

    @classmethod
    def from_env(cls) -> "SoupSettings":
        """Create settings from environment variables."""
        try:
            return cls(
                tau=float(os.getenv("SOUPKIT_TAU", AppConfig.SOUP_DEFAULT_TAU)),
                budget=int(os.getenv("SOUPKIT_BUDGET", AppConfig.SOUP_DEFAULT_BUDGET)),
                solver=os.getenv("SOUPKIT_SOLVER", AppConfig.DFO_DEFAULT_SOLVER),
                initial_radius=float(
                    os.getenv("SOUPKIT_RHO_BEGIN", AppConfig.DFO_INITIAL_RADIUS)
                ),
                final_radius=float(os.getenv("SOUPKIT_RHO_END", AppConfig.DFO_FINAL_RADIUS)),
            )
        except ValueError as e:
            raise ConfigurationError(f"Invalid SOUPKIT_* environment override: {e}") from e
