"""Small feed-forward network: rectifier hidden layers, softmax output,
mini-batch SGD on cross-entropy.

Weights initialize uniformly in [-1/sqrt(fan_in), +1/sqrt(fan_in)] from a
seeded PCG64 stream and biases start at zero, so training is bit-for-bit
reproducible for a given (data, config) pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..data import LabeledDataset
from ..errors import TrainingError
from .base import Classifier


@dataclass(frozen=True)
class MlpConfig:
    hidden_sizes: tuple[int, ...] = (32,)
    learning_rate: float = 0.01
    epochs: int = 200
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "hidden_sizes", tuple(self.hidden_sizes))
        if len(self.hidden_sizes) == 0:
            raise TrainingError("hidden_sizes must be non-empty")
        if any(h < 1 for h in self.hidden_sizes):
            raise TrainingError("hidden layer sizes must be >= 1")
        if self.learning_rate <= 0 or self.epochs < 0 or self.batch_size < 1:
            raise TrainingError("invalid optimizer settings")


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _forward(weights, biases, X):
    """Returns (activations per layer incl. input, output probabilities)."""
    acts = [X]
    h = X
    for W, b in zip(weights[:-1], biases[:-1]):
        h = np.maximum(h @ W + b, 0.0)
        acts.append(h)
    probs = softmax(h @ weights[-1] + biases[-1])
    return acts, probs


def mlp_loss_and_grads(weights, biases, X, y, class_count):
    """Mean cross-entropy and analytic gradients for every parameter."""
    n = X.shape[0]
    acts, probs = _forward(weights, biases, X)
    eps = 1e-12
    loss = float(-np.mean(np.log(probs[np.arange(n), y] + eps)))
    delta = probs
    delta[np.arange(n), y] -= 1.0
    delta /= n
    grads_w = []
    grads_b = []
    for layer in range(len(weights) - 1, -1, -1):
        grads_w.append(acts[layer].T @ delta)
        grads_b.append(delta.sum(axis=0))
        if layer > 0:
            delta = (delta @ weights[layer].T) * (acts[layer] > 0.0)
    grads_w.reverse()
    grads_b.reverse()
    return loss, grads_w, grads_b


@dataclass(frozen=True, eq=False)
class MlpModel(Classifier):
    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]
    n_features: int
    n_classes: int

    def __post_init__(self):
        ws = tuple(np.ascontiguousarray(W, np.float64) for W in self.weights)
        bs = tuple(np.ascontiguousarray(b, np.float64) for b in self.biases)
        dims = [self.n_features] + [W.shape[1] for W in ws]
        for i, W in enumerate(ws):
            if W.shape[0] != dims[i]:
                raise TrainingError("layer dimensions do not chain")
        if dims[-1] != self.n_classes:
            raise TrainingError("output layer width must equal class count")
        for arr in ws + bs:
            arr.setflags(write=False)
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "biases", bs)

    def input_dim(self) -> int:
        return self.n_features

    def class_count(self) -> int:
        return self.n_classes

    def predict_proba_batch(self, X) -> np.ndarray:
        X = self._check_matrix(X)
        _, probs = _forward(self.weights, self.biases, X)
        return probs

    def predict_batch(self, X) -> np.ndarray:
        return self.predict_proba_batch(X).argmax(axis=1).astype(np.int64)


def _init_params(layer_dims, rng):
    weights = []
    biases = []
    for fan_in, fan_out in zip(layer_dims[:-1], layer_dims[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return weights, biases


def mlp_train(data: LabeledDataset, cfg: MlpConfig | None = None) -> MlpModel:
    cfg = cfg or MlpConfig()
    X = data.features
    y = data.labels
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.seed)))
    layer_dims = [data.n_features, *cfg.hidden_sizes, data.class_count]
    weights, biases = _init_params(layer_dims, rng)

    for _ in range(cfg.epochs):
        order = rng.permutation(data.n_rows)
        for start in range(0, data.n_rows, cfg.batch_size):
            batch = order[start:start + cfg.batch_size]
            loss, gw, gb = mlp_loss_and_grads(
                weights, biases, X[batch], y[batch], data.class_count
            )
            if not np.isfinite(loss):
                raise TrainingError(
                    "loss became non-finite; reduce the learning rate"
                )
            for i in range(len(weights)):
                weights[i] = weights[i] - cfg.learning_rate * gw[i]
                biases[i] = biases[i] - cfg.learning_rate * gb[i]
    return MlpModel(
        weights=tuple(weights),
        biases=tuple(biases),
        n_features=data.n_features,
        n_classes=data.class_count,
    )


def mlp_predict(model: MlpModel, point) -> int:
    return model.predict(point)
