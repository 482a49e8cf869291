"""Shared builders for test data and oracles."""

import numpy as np

from copycat.data import FeatureSpec, LabeledDataset
from copycat.models import FunctionClassifier


def dataset(X, y, class_count=None):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if class_count is None:
        class_count = max(2, int(y.max()) + 1)
    schema = tuple(FeatureSpec(f"x{i}") for i in range(X.shape[1]))
    return LabeledDataset(X, y, schema, class_count)


def sign_oracle(feature=0, threshold=0.0, dim=2):
    """Class 1 iff point[feature] > threshold."""
    return FunctionClassifier(
        lambda M: (M[:, feature] > threshold).astype(np.int64), dim
    )


def constant_oracle(label, dim=2, class_count=2):
    return FunctionClassifier(
        lambda M: np.full(M.shape[0], label, dtype=np.int64), dim, class_count
    )


def random_consistent_dataset(rng, n_rows, n_features, n_classes=2,
                              n_values=4):
    """Integer-grid features with labels that are a deterministic function
    of the feature vector: duplicate rows always share a label."""
    X = rng.integers(0, n_values, size=(n_rows, n_features)).astype(np.float64)
    key_weights = rng.integers(1, 100, size=n_features)
    keys = (X * key_weights).sum(axis=1).astype(np.int64)
    y = keys % n_classes
    return dataset(X, y, n_classes)


def central_difference(fn, theta, h=1e-6):
    """Central finite-difference gradient of scalar fn at vector theta."""
    theta = np.asarray(theta, dtype=np.float64)
    grad = np.empty_like(theta)
    for i in range(theta.size):
        step = h * max(1.0, abs(theta[i]))
        up = theta.copy()
        up[i] += step
        down = theta.copy()
        down[i] -= step
        grad[i] = (fn(up) - fn(down)) / (2.0 * step)
    return grad


def relative_gradient_error(analytic, numeric):
    analytic = np.asarray(analytic, dtype=np.float64).ravel()
    numeric = np.asarray(numeric, dtype=np.float64).ravel()
    denom = max(np.linalg.norm(analytic), np.linalg.norm(numeric), 1e-12)
    return float(np.linalg.norm(analytic - numeric) / denom)
