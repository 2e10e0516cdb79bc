"""COBYLA: linear-approximation trust-region solver."""

import warnings

from scipy.optimize import Bounds, minimize

from src.dfo.base_solver import BaseSolver, BudgetedObjective
from src.models.optimization import OptimizationProblem


class CobylaSolver(BaseSolver):
    """COBYLA through scipy, with the box passed as bounds.

    `initial_radius` is the starting trust-region radius (rhobeg) and
    `final_radius` the radius at which the method stops (tol).
    """

    name = "cobyla"

    def _minimize(self, objective: BudgetedObjective, problem: OptimizationProblem) -> None:
        with warnings.catch_warnings():
            # scipy warns when maxiter is reached; the budget wrapper reports that
            warnings.simplefilter("ignore", RuntimeWarning)
            minimize(
                objective,
                x0=problem.initial_point,
                method="COBYLA",
                bounds=Bounds(problem.lower, problem.upper),
                tol=self.final_radius,
                options={"rhobeg": self.initial_radius, "maxiter": problem.budget},
            )
