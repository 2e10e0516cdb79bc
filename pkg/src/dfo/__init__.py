"""Bound-constrained derivative-free maximization under an evaluation budget."""

from typing import Union

from src.app_config import AppConfig
from src.models.enums import SolverKind
from src.models.optimization import OptimizationProblem, OptimizationResult

from .base_solver import BaseSolver, BudgetedObjective, clip_to_bounds
from .cobyla_solver import CobylaSolver
from .nelder_mead_solver import NelderMeadSolver
from .registry import SolverRegistry, solver_registry


def optimize(
    problem: OptimizationProblem,
    solver: Union[str, SolverKind] = AppConfig.DFO_DEFAULT_SOLVER,
    initial_radius: float = AppConfig.DFO_INITIAL_RADIUS,
    final_radius: float = AppConfig.DFO_FINAL_RADIUS,
) -> OptimizationResult:
    """Maximize `problem.objective` over its box with at most `problem.budget` evaluations.

    The returned point is the best one evaluated, so its value is never below
    the value at the initial point.
    """
    return solver_registry.create(solver, initial_radius, final_radius).solve(problem)


__all__ = [
    "optimize",
    "clip_to_bounds",
    "BaseSolver",
    "BudgetedObjective",
    "CobylaSolver",
    "NelderMeadSolver",
    "SolverRegistry",
    "solver_registry",
]
