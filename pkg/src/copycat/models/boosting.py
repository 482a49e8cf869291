"""Gradient-boosted trees for binary classification with logistic loss.

The additive score starts at the clamped log-odds of class 1. Each round
fits a depth-limited regression tree to the residuals (label minus current
probability) and installs one-step Newton leaf values
sum(residual) / sum(p*(1-p)) over each leaf's training rows. Class 1 is
predicted iff the score is strictly positive (a score of exactly 0 gives
class 0).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from ..data import LabeledDataset
from ..errors import TrainingError
from .base import Classifier
from .logistic import sigmoid
from .tree import RegressionTree, grow_regression_tree

PREVALENCE_CLAMP = 1e-6


@dataclass(frozen=True)
class GbtConfig:
    rounds: int = 100
    tree_depth: int = 3
    learning_rate: float = 0.1

    def __post_init__(self):
        if self.rounds < 0:
            raise TrainingError("rounds must be >= 0")
        if self.tree_depth < 1:
            raise TrainingError("tree_depth must be >= 1")
        if not 0.0 < self.learning_rate <= 1.0:
            raise TrainingError("learning_rate must be in (0, 1]")


@dataclass(frozen=True, eq=False)
class GradientBoostedTreesModel(Classifier):
    initial_score: float
    trees: tuple[RegressionTree, ...]
    learning_rate: float
    n_features: int

    def __post_init__(self):
        object.__setattr__(self, "trees", tuple(self.trees))
        object.__setattr__(self, "initial_score", float(self.initial_score))
        object.__setattr__(self, "learning_rate", float(self.learning_rate))

    def input_dim(self) -> int:
        return self.n_features

    def class_count(self) -> int:
        return 2

    def score_batch(self, X) -> np.ndarray:
        X = self._check_matrix(X)
        scores = np.full(X.shape[0], self.initial_score)
        for tree in self.trees:
            scores = scores + self.learning_rate * tree.predict_values(X)
        return scores

    def predict_batch(self, X) -> np.ndarray:
        return (self.score_batch(X) > 0.0).astype(np.int64)


def gbt_train(data: LabeledDataset, cfg: GbtConfig | None = None) -> GradientBoostedTreesModel:
    cfg = cfg or GbtConfig()
    if data.class_count != 2:
        raise TrainingError(
            f"gradient boosting is binary only (got {data.class_count} classes)"
        )
    X = data.features
    y = data.labels.astype(np.float64)
    prevalence = float(y.mean())
    prevalence = min(max(prevalence, PREVALENCE_CLAMP), 1.0 - PREVALENCE_CLAMP)
    initial = math.log(prevalence / (1.0 - prevalence))

    scores = np.full(data.n_rows, initial)
    trees: list[RegressionTree] = []
    for _ in range(cfg.rounds):
        p = sigmoid(scores)
        residual = y - p
        hessian = p * (1.0 - p)
        tree, leaf_rows = grow_regression_tree(X, residual, cfg.tree_depth)
        values = np.array(tree.value)
        for node, rows in enumerate(leaf_rows):
            if rows is None:
                continue
            denom = float(hessian[rows].sum())
            values[node] = float(residual[rows].sum()) / denom if denom > 0 else 0.0
        tree = dataclasses.replace(tree, value=values)
        trees.append(tree)
        scores = scores + cfg.learning_rate * tree.predict_values(X)
        if not np.isfinite(scores).all():
            raise TrainingError("boosting scores became non-finite")
    return GradientBoostedTreesModel(
        initial_score=initial,
        trees=tuple(trees),
        learning_rate=cfg.learning_rate,
        n_features=data.n_features,
    )


def gbt_score(model: GradientBoostedTreesModel, point) -> float:
    point = np.asarray(point, dtype=np.float64)
    return float(model.score_batch(point.reshape(1, -1))[0])


def gbt_predict(model: GradientBoostedTreesModel, point) -> int:
    return model.predict(point)
