"""Nelder-Mead simplex solver with a seeded, jittered initial simplex."""

import numpy as np
from scipy.optimize import Bounds, minimize

from src.app_config import AppConfig
from src.dfo.base_solver import BaseSolver, BudgetedObjective, clip_to_bounds
from src.models.optimization import OptimizationProblem
from src.utils.seeding import make_rng


class NelderMeadSolver(BaseSolver):
    """Nelder-Mead through scipy; trial points are clipped to the box."""

    name = "nelder-mead"

    def __init__(self, *args, jitter: float = AppConfig.DFO_SIMPLEX_JITTER, **kwargs):
        super().__init__(*args, **kwargs)
        self.jitter = jitter

    def initial_simplex(self, problem: OptimizationProblem) -> np.ndarray:
        """Vertex 0 is the initial point; vertex i steps along axis i.

        Steps are `initial_radius` scaled by (1 + jitter * u), u ~ U(-1, 1) drawn
        from the problem seed, and point inward when the upper bound is closer.
        """
        rng = make_rng(problem.seed, "simplex")
        x0 = problem.initial_point
        steps = self.initial_radius * (1.0 + self.jitter * rng.uniform(-1.0, 1.0, problem.dim))

        simplex = np.tile(x0, (problem.dim + 1, 1))
        for i in range(problem.dim):
            room_up = problem.upper[i] - x0[i]
            room_down = x0[i] - problem.lower[i]
            simplex[i + 1, i] += steps[i] if room_up >= room_down else -steps[i]
        return np.array([clip_to_bounds(v, problem.lower, problem.upper) for v in simplex])

    def _minimize(self, objective: BudgetedObjective, problem: OptimizationProblem) -> None:
        minimize(
            objective,
            x0=problem.initial_point,
            method="Nelder-Mead",
            bounds=Bounds(problem.lower, problem.upper),
            options={
                "initial_simplex": self.initial_simplex(problem),
                "maxfev": problem.budget,
                "xatol": self.final_radius,
            },
        )
