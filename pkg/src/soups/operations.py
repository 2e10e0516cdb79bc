"""Building blocks of the soup algorithms: pool sorting, the approximate
average gate and the per-candidate mixing optimization."""

import dataclasses
from typing import Optional

import numpy as np

from src.app_config import AppConfig
from src.dfo import optimize
from src.models.optimization import OptimizationProblem
from src.models.parameter_set import ParameterSet
from src.models.partition_spec import MixingVector, PartitionSpec
from src.models.pool import ModelPool
from src.partition import mix_components, validate
from src.soups.evaluators import Evaluator
from src.tensor_store.arithmetic import lincomb


def average_weight(k: int) -> float:
    """Weight k/(k+1) of the running soup when a (k+1)-th model is averaged in."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return k / (k + 1)


def sort_pool(pool: ModelPool, evaluator: Evaluator) -> ModelPool:
    """Sort a pool by validation accuracy, best first.

    Missing accuracies are computed with the evaluator. Ties keep the input
    order.
    """
    members = [
        member
        if member.val_acc is not None
        else dataclasses.replace(member, val_acc=float(evaluator.evaluate(member.params)))
        for member in pool.members
    ]
    ordered = sorted(members, key=lambda member: member.val_acc, reverse=True)
    return ModelPool(members=ordered, sorted=True, failures=list(pool.failures))


def approx_average_gate(
    psi: ParameterSet,
    theta: ParameterSet,
    k: int,
    evaluator: Evaluator,
    tau: float = AppConfig.SOUP_DEFAULT_TAU,
    psi_acc: Optional[float] = None,
) -> tuple[bool, float]:
    """Cheap pre-test: does the plain running average look promising?

    Forms the approximate average k/(k+1) * psi + 1/(k+1) * theta and passes
    iff its accuracy is strictly greater than tau times the accuracy of psi. The second
    coefficient is computed as 1 - k/(k+1) so the result matches the uniform
    mixing vector the optimizer starts from bit for bit.

    Args:
        psi: Current soup
        theta: Candidate ingredient
        k: Number of models already mixed into psi
        evaluator: Validation accuracy
        tau: Gate tolerance in [0, 1]
        psi_acc: Cached accuracy of psi; evaluated when omitted

    Returns:
        (pass, accuracy of the approximate average)
    """
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    weight = average_weight(k)
    approx = lincomb(weight, psi, 1.0 - weight, theta)
    gate_acc = float(evaluator.evaluate(approx))
    if psi_acc is None:
        psi_acc = float(evaluator.evaluate(psi))
    return gate_acc > tau * psi_acc, gate_acc


def optimize_mixing(
    psi: ParameterSet,
    theta: ParameterSet,
    spec: PartitionSpec,
    k: int,
    evaluator: Evaluator,
    budget: int = AppConfig.SOUP_DEFAULT_BUDGET,
    seed: int = AppConfig.SOUP_DEFAULT_SEED,
    solver: str = AppConfig.DFO_DEFAULT_SOLVER,
    initial_radius: float = AppConfig.DFO_INITIAL_RADIUS,
    final_radius: float = AppConfig.DFO_FINAL_RADIUS,
) -> tuple[MixingVector, ParameterSet, float]:
    """Search the mixing vector that maximizes validation accuracy of the component-wise mix.

    Starts from the uniform vector k/(k+1) (the approximate average) and runs
    the derivative-free optimizer on lambda -> accuracy(mix(psi, theta, lambda)).

    Returns:
        (best mixing vector, the mixed model it produces, its accuracy)

    Raises:
        ObjectiveEvaluationError: the evaluator failed during the search
    """
    validate(spec, psi.names)

    def objective(lam: np.ndarray) -> float:
        return evaluator.evaluate(mix_components(psi, theta, spec, lam))

    problem = OptimizationProblem(
        dim=spec.m,
        objective=objective,
        initial_point=np.full(spec.m, average_weight(k)),
        budget=budget,
        seed=seed,
    )
    result = optimize(problem, solver, initial_radius, final_radius)
    lambda_star = MixingVector(tuple(result.best_point))
    return lambda_star, mix_components(psi, theta, spec, lambda_star), float(result.best_value)
