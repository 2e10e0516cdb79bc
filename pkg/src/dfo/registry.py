"""Solver registry mapping solver names to implementations."""

from typing import Union

from src.app_config import AppConfig
from src.dfo.base_solver import BaseSolver
from src.dfo.cobyla_solver import CobylaSolver
from src.dfo.nelder_mead_solver import NelderMeadSolver
from src.exceptions import ConfigurationError
from src.models.enums import SolverKind


class SolverRegistry:
    """Registry of derivative-free solvers selectable by name."""

    def __init__(self):
        self.solvers: dict[str, type[BaseSolver]] = {}
        self._register_all_solvers()

    def _register_all_solvers(self):
        self.register(SolverKind.COBYLA.value, CobylaSolver)
        self.register(SolverKind.NELDER_MEAD.value, NelderMeadSolver)

    def register(self, name: str, solver_class: type[BaseSolver]):
        """Register a solver class under a name.

        Args:
            name: CLI-facing solver name
            solver_class: BaseSolver subclass
        """
        self.solvers[name] = solver_class

    def create(
        self,
        name: Union[str, SolverKind],
        initial_radius: float = AppConfig.DFO_INITIAL_RADIUS,
        final_radius: float = AppConfig.DFO_FINAL_RADIUS,
    ) -> BaseSolver:
        """Instantiate a registered solver.

        Raises:
            ConfigurationError: unknown solver name or invalid radii
        """
        key = name.value if isinstance(name, SolverKind) else str(name)
        if key not in self.solvers:
            raise ConfigurationError(
                f"Unknown solver '{key}', available: {sorted(self.solvers)}"
            )
        try:
            return self.solvers[key](initial_radius=initial_radius, final_radius=final_radius)
        except ValueError as e:
            raise ConfigurationError(str(e)) from e

    def names(self) -> list[str]:
        return list(self.solvers)


solver_registry = SolverRegistry()
