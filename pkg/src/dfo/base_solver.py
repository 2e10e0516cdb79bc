"""Base class for bound-constrained derivative-free solvers.

Solvers minimize through scipy; the shared `BudgetedObjective` turns the
problem's maximization objective into the negated, clipped, cached and
budget-limited callable scipy sees, and remembers the best point it was
ever asked about.
"""

from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from src.app_config import AppConfig
from src.exceptions import ObjectiveEvaluationError
from src.models.optimization import OptimizationProblem, OptimizationResult
from src.utils.logging_utils import SoupLogger


def clip_to_bounds(x: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Project x onto the box [lo, hi] coordinate by coordinate.

    Raises:
        ValueError: x, lo and hi differ in length, or lo > hi somewhere
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    lo = np.asarray(lo, dtype=np.float64).ravel()
    hi = np.asarray(hi, dtype=np.float64).ravel()
    if not (x.shape == lo.shape == hi.shape):
        raise ValueError(
            f"dimension mismatch: x has {x.size}, lo has {lo.size}, hi has {hi.size} entries"
        )
    if np.any(lo > hi):
        raise ValueError("lower bound exceeds upper bound")
    return np.minimum(hi, np.maximum(lo, x))


class _BudgetExhausted(Exception):
    """Raised inside the solver loop once the evaluation budget is spent."""


class BudgetedObjective:
    """Counting, clipping, caching wrapper around a maximization objective.

    Calling the wrapper returns the negated objective value so that scipy's
    minimizers can be used directly. Repeated points are served from the
    cache without consuming budget.
    """

    def __init__(self, problem: OptimizationProblem):
        self.problem = problem
        self.evaluations = 0
        self.best_point: Optional[np.ndarray] = None
        self.best_value = -np.inf
        self.trace: list[tuple[np.ndarray, float]] = []
        self._cache: dict[bytes, float] = {}

    @property
    def exhausted(self) -> bool:
        return self.evaluations >= self.problem.budget

    def value(self, x: np.ndarray) -> float:
        """Objective value at the clipped point, evaluating at most once per point."""
        point = clip_to_bounds(x, self.problem.lower, self.problem.upper)
        key = point.tobytes()
        if key in self._cache:
            return self._cache[key]
        if self.exhausted:
            raise _BudgetExhausted()

        try:
            value = float(self.problem.objective(point.copy()))
        except Exception as e:
            raise ObjectiveEvaluationError(
                f"objective failed at {point.tolist()}: {e}", self.evaluations
            ) from e
        self.evaluations += 1
        self._cache[key] = value

        if self.problem.record_trace:
            self.trace.append((point.copy(), value))
        # Strict: on ties the earliest point stays best
        if self.best_point is None or value > self.best_value:
            self.best_point = point.copy()
            self.best_value = value
        return value

    def __call__(self, x: np.ndarray) -> float:
        return -self.value(x)


class BaseSolver(ABC):
    """Base class for all derivative-free solvers.

    Subclasses implement `_minimize`, which drives a scipy minimizer over the
    wrapped objective. Budget exhaustion and scipy's own stopping rules both
    end the run; the result is always the best point evaluated.
    """

    name = "base"

    def __init__(
        self,
        initial_radius: float = AppConfig.DFO_INITIAL_RADIUS,
        final_radius: float = AppConfig.DFO_FINAL_RADIUS,
    ):
        if not 0 < final_radius <= initial_radius:
            raise ValueError(
                f"radii must satisfy 0 < final ({final_radius}) <= initial ({initial_radius})"
            )
        self.initial_radius = initial_radius
        self.final_radius = final_radius
        self.logger = SoupLogger(self.__class__.__name__)

    def solve(self, problem: OptimizationProblem) -> OptimizationResult:
        """Maximize the problem's objective within its bounds and budget.

        Raises:
            ObjectiveEvaluationError: the objective raised; carries the number of
                evaluations completed before the failure
        """
        objective = BudgetedObjective(problem)
        objective.value(problem.initial_point)

        if not objective.exhausted:
            try:
                self._minimize(objective, problem)
            except _BudgetExhausted:
                self.logger.debug(f"{self.name}: budget of {problem.budget} evaluations spent")

        self.logger.debug(
            f"{self.name}: best value {objective.best_value:.6f} "
            f"after {objective.evaluations} evaluations"
        )
        return OptimizationResult(
            best_point=objective.best_point,
            best_value=objective.best_value,
            evaluations=objective.evaluations,
            solver=self.name,
            trace=objective.trace,
        )

    @abstractmethod
    def _minimize(self, objective: BudgetedObjective, problem: OptimizationProblem) -> None:
        """Run the underlying minimizer on the negated objective.

        Args:
            objective: Wrapped objective; returns -f(clip(x))
            problem: Problem with bounds, initial point, budget and seed
        """
        pass
