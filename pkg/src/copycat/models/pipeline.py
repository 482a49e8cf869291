"""Feature-engineering pipelines wrapped as single opaque classifiers.

A pipeline composes a row-vectorized feature map with an inner model so
the whole predictive system exposes one predict() on the raw attribute
space: exactly what the copier needs to treat engineered-feature systems
as black boxes.

Maps registered by name (with JSON-serializable params) survive model
persistence; ad-hoc callables work everywhere except save().
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError, DataError
from .base import Classifier

_MAP_REGISTRY: dict[str, callable] = {}


def register_feature_map(name: str, builder) -> None:
    """builder(params: dict) -> row-vectorized callable matrix -> matrix."""
    if name in _MAP_REGISTRY:
        raise ConfigError(f"feature map {name!r} already registered")
    _MAP_REGISTRY[name] = builder


def build_feature_map(name: str, params: dict):
    try:
        builder = _MAP_REGISTRY[name]
    except KeyError:
        raise ConfigError(f"unknown feature map {name!r}") from None
    return builder(params)


def _identity_map(params):
    return lambda X: X


def _select_columns_map(params):
    cols = np.asarray(params["columns"], dtype=np.int64)

    def mapper(X):
        return X[:, cols]

    return mapper


register_feature_map("identity", _identity_map)
register_feature_map("select_columns", _select_columns_map)


class PipelineClassifier(Classifier):
    """predict(x) = inner.predict(feature_map(x)); input_dim is the raw
    dimension, not the engineered one."""

    def __init__(self, feature_map, inner: Classifier, input_dim: int,
                 map_name: str | None = None, map_params: dict | None = None):
        self._map = feature_map
        self._inner = inner
        self._d = int(input_dim)
        self.map_name = map_name
        self.map_params = map_params
        probe = np.asarray(feature_map(np.zeros((1, self._d))))
        if probe.ndim != 2 or probe.shape[1] != inner.input_dim():
            raise ConfigError(
                f"feature map produces {probe.shape[-1]} columns but the "
                f"inner model expects {inner.input_dim()}"
            )

    def input_dim(self) -> int:
        return self._d

    def class_count(self) -> int:
        return self._inner.class_count()

    @property
    def inner(self) -> Classifier:
        return self._inner

    def transform(self, X) -> np.ndarray:
        X = self._check_matrix(X)
        return np.asarray(self._map(X), dtype=np.float64)

    def predict_batch(self, X) -> np.ndarray:
        return self._inner.predict_batch(self.transform(X))


def pipeline_classifier(feature_map, inner: Classifier, input_dim: int,
                        map_name: str | None = None,
                        map_params: dict | None = None) -> PipelineClassifier:
    if input_dim < 1:
        raise DataError("input_dim must be >= 1")
    return PipelineClassifier(feature_map, inner, input_dim, map_name, map_params)


def named_pipeline(map_name: str, map_params: dict, inner: Classifier,
                   input_dim: int) -> PipelineClassifier:
    """Pipeline built from a registered map; serializable via persist."""
    feature_map = build_feature_map(map_name, map_params)
    return PipelineClassifier(feature_map, inner, input_dim, map_name, map_params)
