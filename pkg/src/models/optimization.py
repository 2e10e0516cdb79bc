"""Derivative-free optimization problem and result models."""

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from src.app_config import AppConfig

Objective = Callable[[np.ndarray], float]


@dataclass
class OptimizationProblem:
    """Bound-constrained black-box maximization problem.

    Bounds default to the unit box [0, 1]^dim. `seed` feeds any stochastic
    element of the solver (the Nelder-Mead simplex jitter).
    """

    dim: int
    objective: Objective
    initial_point: np.ndarray
    budget: int = AppConfig.SOUP_DEFAULT_BUDGET
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    seed: int = 0
    record_trace: bool = True

    def __post_init__(self):
        self.initial_point = np.asarray(self.initial_point, dtype=np.float64).ravel()
        self.lower = (
            np.zeros(self.dim) if self.lower is None else np.asarray(self.lower, dtype=np.float64)
        )
        self.upper = (
            np.ones(self.dim) if self.upper is None else np.asarray(self.upper, dtype=np.float64)
        )
        if self.dim < 1:
            raise ValueError(f"Problem dimension must be >= 1, got {self.dim}")
        for label, vector in (
            ("initial point", self.initial_point),
            ("lower bound", self.lower),
            ("upper bound", self.upper),
        ):
            if vector.shape != (self.dim,):
                raise ValueError(f"{label} has shape {vector.shape}, expected ({self.dim},)")
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound exceeds upper bound")
        if np.any(self.initial_point < self.lower) or np.any(self.initial_point > self.upper):
            raise ValueError(f"initial point {self.initial_point.tolist()} outside bounds")
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")


@dataclass
class OptimizationResult:
    """Best point found, its recorded value, and the evaluation trace."""

    best_point: np.ndarray
    best_value: float
    evaluations: int
    solver: str
    trace: list[tuple[np.ndarray, float]] = field(default_factory=list)

    def running_best(self) -> list[float]:
        """Best-so-far value after each trace entry."""
        best: list[float] = []
        for _, value in self.trace:
            best.append(value if not best else max(best[-1], value))
        return best
