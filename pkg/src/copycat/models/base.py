"""Common prediction interface for originals and copies.

Trained models are immutable: predict is a pure function of its input, so
instances can be shared freely across threads.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from ..errors import DataError


class Classifier(ABC):
    """predict/predict_batch over a fixed input dimension and class count."""

    @abstractmethod
    def input_dim(self) -> int: ...

    @abstractmethod
    def class_count(self) -> int: ...

    @abstractmethod
    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        """Class index per row of X (shape (n, input_dim))."""

    def predict(self, point) -> int:
        point = np.asarray(point, dtype=np.float64)
        return int(self.predict_batch(point.reshape(1, -1))[0])

    def _check_matrix(self, X) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.input_dim():
            raise DataError(
                f"expected (n, {self.input_dim()}) inputs, got {X.shape}"
            )
        return X


class FunctionClassifier(Classifier):
    """Wrap an arbitrary row-vectorized labeling function as a Classifier.

    Handy for tests and for plugging external oracles into the copier; not
    serializable.
    """

    def __init__(self, fn, input_dim: int, class_count: int = 2):
        self._fn = fn
        self._d = int(input_dim)
        self._k = int(class_count)

    def input_dim(self) -> int:
        return self._d

    def class_count(self) -> int:
        return self._k

    def predict_batch(self, X) -> np.ndarray:
        X = self._check_matrix(X)
        out = np.asarray(self._fn(X), dtype=np.int64)
        if out.shape != (X.shape[0],):
            raise DataError("labeling function must return one label per row")
        return out
