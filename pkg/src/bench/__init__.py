"""Desk-scale experiment harness: synthetic tasks, pool training and OOD evaluation."""

from .bundle_store import load_bundle, save_bundle
from .configs import load_grid, load_task_config, reseed_grid, reseed_task
from .evaluation import BenchEvaluator, evaluate, evaluate_ood
from .mlp import MLPArchitecture, logits, predict
from .task_generator import apply_shift, make_task
from .trainer import PoolTrainer, majority_class_rate, train_pool

__all__ = [
    "make_task",
    "load_task_config",
    "load_grid",
    "reseed_task",
    "reseed_grid",
    "apply_shift",
    "save_bundle",
    "load_bundle",
    "train_pool",
    "PoolTrainer",
    "majority_class_rate",
    "evaluate",
    "evaluate_ood",
    "BenchEvaluator",
    "MLPArchitecture",
    "logits",
    "predict",
]
