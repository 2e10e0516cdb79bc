"""Pool training: finetune one classifier per grid config from a shared init."""

from collections.abc import Sequence
from typing import Optional

import numpy as np
from tqdm import tqdm

from src.app_config import AppConfig
from src.bench.evaluation import BenchEvaluator
from src.bench.mlp import MLPArchitecture, hidden_features
from src.exceptions import ConfigurationError, NumericError, TaskSpecError, TrainingDivergedError
from src.models.bench import DatasetBundle, TrainConfig
from src.models.parameter_set import ParameterSet
from src.models.pool import ModelPool, PoolMember
from src.utils.logging_utils import SoupLogger
from src.utils.seeding import make_rng


def _softmax_cross_entropy(logits: np.ndarray, labels: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean cross-entropy and its gradient with respect to the logits."""
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    rows = np.arange(labels.size)
    loss = -float(log_probs[rows, labels].mean())
    grad = np.exp(log_probs)
    grad[rows, labels] -= 1.0
    return loss, grad / labels.size


class PoolTrainer:
    """Trains a grid of configs that share architecture and initialization.

    The shared initialization draws the hidden layers from the task seed and
    the configs' `init_id`; with `ridge_head` the head is then fitted by
    ridge regression on the frozen random features of the training split.
    """

    def __init__(self, bundle: DatasetBundle, show_progress: bool = False):
        self.bundle = bundle
        self.show_progress = show_progress
        self.evaluator = BenchEvaluator(bundle, AppConfig.BENCH_VALIDATION_SPLIT)
        self.logger = SoupLogger(self.__class__.__name__)

    def architecture(self, config: TrainConfig) -> MLPArchitecture:
        task = self.bundle.task
        return MLPArchitecture(task.input_dim, tuple(config.hidden_sizes), task.num_classes)

    # ===== Shared initialization =====

    def shared_init(self, config: TrainConfig) -> ParameterSet:
        """Initialization shared by every config with the same init_id and architecture."""
        arch = self.architecture(config)
        rng = make_rng(self.bundle.task.seed, "init", config.init_id)
        tensors: dict[str, np.ndarray] = {}
        for i, (fan_out, fan_in) in enumerate(arch.layer_sizes):
            tensors[f"layers.{i}.weight"] = rng.normal(0.0, np.sqrt(2.0 / fan_in), (fan_out, fan_in))
            tensors[f"layers.{i}.bias"] = np.zeros(fan_out)

        head_in = arch.hidden_sizes[-1] if arch.hidden_sizes else arch.input_dim
        tensors["head.weight"] = rng.normal(0.0, np.sqrt(1.0 / head_in), (arch.num_classes, head_in))
        tensors["head.bias"] = np.zeros(arch.num_classes)
        params = ParameterSet(tensors)

        if config.ridge_head:
            params = self._fit_ridge_head(params, arch)
        return params

    def _fit_ridge_head(self, params: ParameterSet, arch: MLPArchitecture) -> ParameterSet:
        train = self.bundle.split("train")
        h = hidden_features(params, train.features, len(arch.hidden_sizes))
        design = np.hstack([h, np.ones((h.shape[0], 1))])
        targets = np.eye(arch.num_classes)[train.labels]
        gram = design.T @ design + AppConfig.BENCH_HEAD_RIDGE * len(train) * np.eye(design.shape[1])
        solution = np.linalg.solve(gram, design.T @ targets)

        tensors = {name: params[name] for name in params}
        tensors["head.weight"] = solution[:-1].T
        tensors["head.bias"] = solution[-1]
        return ParameterSet(tensors)

    # ===== Finetuning =====

    def train(self, config: TrainConfig, init: ParameterSet) -> ParameterSet:
        """Mini-batch SGD with weight decay on cross-entropy.

        Raises:
            TrainingDivergedError: the loss became non-finite
        """
        arch = self.architecture(config)
        depth = len(arch.hidden_sizes)
        train = self.bundle.split("train")
        rng = make_rng(config.seed, "sgd")
        weights = {name: init[name].astype(np.float64) for name in init}

        for epoch in range(config.epochs):
            order = rng.permutation(len(train))
            losses = []
            for start in range(0, len(train), config.batch_size):
                batch = order[start:start + config.batch_size]
                x = train.features[batch].astype(np.float64)
                if config.augmentation_noise > 0:
                    x = x + rng.normal(0.0, config.augmentation_noise, x.shape)
                with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                    loss = self._sgd_step(weights, depth, x, train.labels[batch], config)
                losses.append(loss)

            epoch_loss = float(np.mean(losses))
            if not np.isfinite(epoch_loss):
                raise TrainingDivergedError(config.config_id, epoch)
            self.logger.log_training(config.config_id, epoch, epoch_loss)

        if not all(np.all(np.isfinite(w)) for w in weights.values()):
            raise TrainingDivergedError(config.config_id, config.epochs - 1)
        return ParameterSet((name, weights[name]) for name in init)

    def _sgd_step(
        self,
        weights: dict[str, np.ndarray],
        depth: int,
        x: np.ndarray,
        labels: np.ndarray,
        config: TrainConfig,
    ) -> float:
        activations = [x]
        for i in range(depth):
            z = activations[-1] @ weights[f"layers.{i}.weight"].T + weights[f"layers.{i}.bias"]
            activations.append(np.maximum(z, 0.0))
        scores = activations[-1] @ weights["head.weight"].T + weights["head.bias"]
        loss, grad = _softmax_cross_entropy(scores, labels)

        grads = {
            "head.weight": grad.T @ activations[-1],
            "head.bias": grad.sum(axis=0),
        }
        upstream = grad @ weights["head.weight"]
        for i in reversed(range(depth)):
            upstream = upstream * (activations[i + 1] > 0)
            grads[f"layers.{i}.weight"] = upstream.T @ activations[i]
            grads[f"layers.{i}.bias"] = upstream.sum(axis=0)
            upstream = upstream @ weights[f"layers.{i}.weight"]

        for name, g in grads.items():
            if name.endswith(".weight"):
                g = g + config.weight_decay * weights[name]
            weights[name] -= config.learning_rate * g
        return loss

    # ===== Pool =====

    def train_pool(self, grid: Sequence[TrainConfig]) -> ModelPool:
        """Train every config; divergent configs are recorded in `pool.failures`.

        Raises:
            ConfigurationError: empty grid
            TaskSpecError: configs disagree on architecture, init or head fit
        """
        if not grid:
            raise ConfigurationError("training grid is empty")
        ids = [config.config_id for config in grid]
        if len(set(ids)) != len(ids):
            raise TaskSpecError(f"duplicate config ids in grid: {ids}")
        for config in grid:
            config.validate()
        reference = grid[0]
        for config in grid[1:]:
            if (config.hidden_sizes, config.init_id, config.ridge_head) != (
                reference.hidden_sizes,
                reference.init_id,
                reference.ridge_head,
            ):
                raise TaskSpecError(
                    f"config '{config.config_id}' does not share the architecture and "
                    f"initialization of '{reference.config_id}'"
                )

        init = self.shared_init(reference)
        members: list[PoolMember] = []
        failures: list[dict[str, str]] = []
        for config in tqdm(grid, desc="Training pool", unit="model", disable=not self.show_progress):
            try:
                params = self.train(config, init)
            except NumericError as e:
                self.logger.warning(f"Config '{config.config_id}' failed: {e}")
                failures.append({"config_id": config.config_id, "error": str(e)})
                continue

            val_acc = self.evaluator.evaluate(params)
            metadata = {key: str(value) for key, value in config.to_dict().items()}
            metadata["val_acc"] = repr(val_acc)
            members.append(PoolMember(config.config_id, params, val_acc, metadata))
            self.logger.info(f"Config '{config.config_id}': val_acc={val_acc:.4f}")

        return ModelPool(members=members, failures=failures)


def train_pool(
    bundle: DatasetBundle, grid: Sequence[TrainConfig], show_progress: bool = False
) -> ModelPool:
    """Train one pool member per grid config from a shared initialization."""
    return PoolTrainer(bundle, show_progress=show_progress).train_pool(grid)


def majority_class_rate(bundle: DatasetBundle, split: Optional[str] = None) -> float:
    """Accuracy of always predicting the most frequent class of a split."""
    labels = bundle.split(split or AppConfig.BENCH_VALIDATION_SPLIT).labels
    return float(np.bincount(labels).max() / labels.size)
