"""Binary logistic regression trained by full-batch gradient descent.

No early stopping: a fixed iteration budget keeps runs deterministic.
Probability exactly 0.5 predicts class 0 (documented tie rule).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..data import LabeledDataset
from ..errors import TrainingError
from .base import Classifier


@dataclass(frozen=True)
class LrConfig:
    learning_rate: float = 0.1
    iterations: int = 1000
    l2_penalty: float = 0.0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise TrainingError("learning_rate must be positive")
        if self.iterations < 0:
            raise TrainingError("iterations must be >= 0")
        if self.l2_penalty < 0:
            raise TrainingError("l2_penalty must be >= 0")


def sigmoid(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logistic_loss_and_grad(weights, bias, X, y, l2_penalty=0.0):
    """Mean logistic loss + l2/2 * ||w||^2 and its analytic gradient.

    Exposed separately so the finite-difference checks can drive it at
    arbitrary parameter points.
    """
    z = X @ weights + bias
    # log(1 + e^z) - y*z, computed stably
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
    loss += 0.5 * l2_penalty * float(weights @ weights)
    p = sigmoid(z)
    residual = p - y
    grad_w = X.T @ residual / X.shape[0] + l2_penalty * weights
    grad_b = float(residual.mean())
    return loss, grad_w, grad_b


@dataclass(frozen=True, eq=False)
class LogisticRegressionModel(Classifier):
    weights: np.ndarray
    bias: float

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if w.ndim != 1:
            raise TrainingError("weights must be a vector")
        if not (np.isfinite(w).all() and np.isfinite(self.bias)):
            raise TrainingError("parameters must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", float(self.bias))

    def input_dim(self) -> int:
        return self.weights.shape[0]

    def class_count(self) -> int:
        return 2

    def predict_proba_batch(self, X) -> np.ndarray:
        X = self._check_matrix(X)
        return sigmoid(X @ self.weights + self.bias)

    def predict_batch(self, X) -> np.ndarray:
        return (self.predict_proba_batch(X) > 0.5).astype(np.int64)


def lr_train(data: LabeledDataset, cfg: LrConfig | None = None) -> LogisticRegressionModel:
    """Zero-initialized full-batch gradient descent for a fixed number of
    iterations; raises TrainingError on divergence or non-binary labels."""
    cfg = cfg or LrConfig()
    if data.class_count != 2:
        raise TrainingError(
            f"logistic regression is binary only (got {data.class_count} classes)"
        )
    X = data.features
    y = data.labels.astype(np.float64)
    w = np.zeros(data.n_features)
    b = 0.0
    for _ in range(cfg.iterations):
        loss, gw, gb = logistic_loss_and_grad(w, b, X, y, cfg.l2_penalty)
        if not np.isfinite(loss):
            raise TrainingError(
                "loss became non-finite; reduce the learning rate"
            )
        w = w - cfg.learning_rate * gw
        b = b - cfg.learning_rate * gb
    if not (np.isfinite(w).all() and np.isfinite(b)):
        raise TrainingError("parameters became non-finite; reduce the learning rate")
    return LogisticRegressionModel(w, b)


def lr_predict_proba(model: LogisticRegressionModel, point) -> float:
    point = np.asarray(point, dtype=np.float64)
    return float(model.predict_proba_batch(point.reshape(1, -1))[0])
