"""Fusion algorithms: uniform soup, greedy soup and the manifold mixing soup."""

from typing import Optional

from src.app_config import AppConfig
from src.models.parameter_set import ParameterSet
from src.models.partition_spec import PartitionSpec
from src.models.pool import ModelPool
from src.models.soup_report import SoupReport

from .base_soup import BaseSoup
from .evaluators import CountingEvaluator, Evaluator
from .greedy_soup import GreedySoup
from .manifold_soup import ManifoldMixSoup
from .operations import approx_average_gate, optimize_mixing, sort_pool
from .registry import SoupRegistry, soup_registry, soup_seed
from .uniform_soup import UniformSoup


def uniform_soup(
    pool: ModelPool, evaluator: Optional[Evaluator] = None
) -> tuple[ParameterSet, SoupReport]:
    """Elementwise mean of all pool members."""
    return UniformSoup(evaluator).run(pool)


def greedy_soup(pool: ModelPool, evaluator: Evaluator) -> tuple[ParameterSet, SoupReport]:
    """Best-first uniform averaging, keeping a model only if validation accuracy strictly improves."""
    return GreedySoup(evaluator).run(pool)


def manifold_mix_soup(
    pool: ModelPool,
    spec: PartitionSpec,
    evaluator: Evaluator,
    tau: float = AppConfig.SOUP_DEFAULT_TAU,
    budget: int = AppConfig.SOUP_DEFAULT_BUDGET,
    seed: int = AppConfig.SOUP_DEFAULT_SEED,
    solver: str = AppConfig.DFO_DEFAULT_SOLVER,
) -> tuple[ParameterSet, SoupReport]:
    """Manifold mixing soup over the components of `spec`."""
    return ManifoldMixSoup(evaluator, spec, tau=tau, budget=budget, seed=seed, solver=solver).run(pool)


__all__ = [
    "uniform_soup",
    "greedy_soup",
    "manifold_mix_soup",
    "sort_pool",
    "approx_average_gate",
    "optimize_mixing",
    "Evaluator",
    "CountingEvaluator",
    "BaseSoup",
    "UniformSoup",
    "GreedySoup",
    "ManifoldMixSoup",
    "SoupRegistry",
    "soup_registry",
    "soup_seed",
]
