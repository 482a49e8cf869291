"""CART decision trees (classification) and the shared grower used by the
boosted regression trees.

Split semantics are part of this package's contract and are pinned exactly:

* candidate thresholds are midpoints between consecutive distinct sorted
  values of a feature;
* the best (feature, threshold) maximizes the count-weighted impurity
  decrease (Gini for classification, variance for regression); ties break
  toward the lowest feature index, then the lowest threshold;
* routing is ``value <= threshold`` goes left;
* leaf labels are the argmax of the class histogram, ties to the lowest
  class index.

Classification growth stops at a pure node, at ``min_samples_split``, at
``max_depth`` when set, or when no feature has two distinct values in the
node. An impure splittable node is always split, even when the best
impurity decrease is zero: this is what guarantees zero training error on
any dataset whose duplicate feature vectors carry equal labels (synthetic
sets labeled by a deterministic oracle always satisfy that premise).
Regression growth additionally stops when the best variance decrease is
not positive.

With ``max_depth`` unset the tree has no capacity control; that is the
intended configuration for copies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..data import LabeledDataset
from ..errors import TrainingError
from .base import Classifier

LEAF = -1


@dataclass(frozen=True)
class CartConfig:
    """max_depth=None means unbounded growth (no capacity control)."""

    max_depth: int | None = None
    min_samples_split: int = 2

    def __post_init__(self):
        if self.max_depth is not None and self.max_depth < 0:
            raise TrainingError("max_depth must be >= 0 when set")
        if self.min_samples_split < 2:
            raise TrainingError("min_samples_split must be >= 2")


class _NodeStore:
    """Append-only arrays describing a binary tree under construction."""

    def __init__(self):
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.n_samples: list[int] = []
        self.split_gain: list[float] = []

    def add(self, n: int) -> int:
        self.feature.append(LEAF)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.n_samples.append(n)
        self.split_gain.append(0.0)
        return len(self.feature) - 1

    def make_internal(self, node: int, feature: int, threshold: float,
                      gain: float) -> None:
        self.feature[node] = feature
        self.threshold[node] = threshold
        self.split_gain[node] = gain


def _presort(X: np.ndarray) -> np.ndarray:
    d = X.shape[1]
    S = np.empty((d, X.shape[0]), dtype=np.int32)
    for f in range(d):
        S[f] = np.argsort(X[:, f], kind="stable")
    return S


def _partition(S: np.ndarray, in_left: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Boolean row-major selection preserves each feature's sorted order, so
    # children inherit valid presorted index matrices without re-sorting.
    take = in_left[S]
    d = S.shape[0]
    n_left = int(take[0].sum())
    left = S[take].reshape(d, n_left)
    right = S[~take].reshape(d, S.shape[1] - n_left)
    return left, right


@dataclass(frozen=True, eq=False)
class DecisionTreeModel(Classifier):
    """Flattened-array CART classifier.

    ``feature[i] == -1`` marks leaves. ``histogram`` holds per-node class
    counts from training; ``split_gain`` holds each split's count-weighted
    Gini decrease (zero at leaves) for impurity-based importances.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    histogram: np.ndarray
    label: np.ndarray
    n_samples: np.ndarray
    split_gain: np.ndarray
    n_features: int
    root: int = 0

    def __post_init__(self):
        for name in ("feature", "left", "right"):
            object.__setattr__(self, name,
                               np.ascontiguousarray(getattr(self, name), np.int32))
        object.__setattr__(self, "threshold",
                           np.ascontiguousarray(self.threshold, np.float64))
        object.__setattr__(self, "histogram",
                           np.ascontiguousarray(self.histogram, np.int64))
        object.__setattr__(self, "label",
                           np.ascontiguousarray(self.label, np.int64))
        object.__setattr__(self, "n_samples",
                           np.ascontiguousarray(self.n_samples, np.int64))
        object.__setattr__(self, "split_gain",
                           np.ascontiguousarray(self.split_gain, np.float64))
        for name in ("feature", "threshold", "left", "right", "histogram",
                     "label", "n_samples", "split_gain"):
            getattr(self, name).setflags(write=False)

    def input_dim(self) -> int:
        return self.n_features

    def class_count(self) -> int:
        return self.histogram.shape[1]

    def predict_batch(self, X) -> np.ndarray:
        X = self._check_matrix(X)
        leaves = _kernels.impl().traverse(
            self.feature, self.threshold, self.left, self.right, X, self.root
        )
        return self.label[leaves]

    @property
    def node_count(self) -> int:
        return self.feature.shape[0]

    @property
    def leaf_count(self) -> int:
        return int((self.feature == LEAF).sum())

    def depth(self) -> int:
        depths = np.zeros(self.node_count, dtype=np.int64)
        out = 0
        stack = [(self.root, 0)]
        while stack:
            node, dep = stack.pop()
            depths[node] = dep
            if self.feature[node] != LEAF:
                stack.append((int(self.left[node]), dep + 1))
                stack.append((int(self.right[node]), dep + 1))
            else:
                out = max(out, dep)
        return out


def cart_train(data: LabeledDataset, cfg: CartConfig | None = None) -> DecisionTreeModel:
    """Greedy CART on Gini impurity; see the module docstring for the exact
    split and stopping semantics."""
    cfg = cfg or CartConfig()
    X = np.ascontiguousarray(data.features, dtype=np.float64)
    y = np.ascontiguousarray(data.labels, dtype=np.int64)
    K = data.class_count
    kern = _kernels.impl()

    store = _NodeStore()
    histograms: list[np.ndarray] = []
    in_left = np.zeros(X.shape[0], dtype=bool)

    root_S = _presort(X)
    root = store.add(root_S.shape[1])
    histograms.append(np.bincount(y[root_S[0]], minlength=K).astype(np.int64))
    stack = [(root, root_S, 0)]
    while stack:
        node, S, depth = stack.pop()
        n = S.shape[1]
        hist = histograms[node]
        pure = int(hist.max()) == n
        depth_capped = cfg.max_depth is not None and depth >= cfg.max_depth
        if pure or depth_capped or n < cfg.min_samples_split:
            continue
        f, thr, gain, found = kern.best_split_gini(X, y, S, K)
        if not found:
            continue
        rows = S[f]
        go_left = X[rows, f] <= thr
        # midpoints of adjacent floats can round onto the upper value and
        # leave a child empty; such a node cannot be split usefully
        if go_left.all() or not go_left.any():
            continue
        in_left[rows] = go_left
        S_l, S_r = _partition(S, in_left)
        store.make_internal(node, f, thr, gain)
        left_id = store.add(S_l.shape[1])
        histograms.append(np.bincount(y[S_l[0]], minlength=K).astype(np.int64))
        right_id = store.add(S_r.shape[1])
        histograms.append(np.bincount(y[S_r[0]], minlength=K).astype(np.int64))
        store.left[node] = left_id
        store.right[node] = right_id
        stack.append((right_id, S_r, depth + 1))
        stack.append((left_id, S_l, depth + 1))

    hist_matrix = np.stack(histograms)
    labels = hist_matrix.argmax(axis=1).astype(np.int64)
    return DecisionTreeModel(
        feature=np.array(store.feature, dtype=np.int32),
        threshold=np.array(store.threshold, dtype=np.float64),
        left=np.array(store.left, dtype=np.int32),
        right=np.array(store.right, dtype=np.int32),
        histogram=hist_matrix,
        label=labels,
        n_samples=np.array(store.n_samples, dtype=np.int64),
        split_gain=np.array(store.split_gain, dtype=np.float64),
        n_features=X.shape[1],
    )


def cart_predict(model: DecisionTreeModel, point) -> int:
    return model.predict(point)


@dataclass(frozen=True, eq=False)
class RegressionTree:
    """Regression tree with real leaf values; used inside boosting.

    split_gain holds count-weighted variance decreases, the regression
    analogue of the classification tree's Gini gains.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    n_samples: np.ndarray
    split_gain: np.ndarray
    n_features: int
    root: int = 0

    def __post_init__(self):
        for name in ("feature", "left", "right"):
            object.__setattr__(self, name,
                               np.ascontiguousarray(getattr(self, name), np.int32))
        for name in ("threshold", "value", "split_gain"):
            object.__setattr__(self, name,
                               np.ascontiguousarray(getattr(self, name), np.float64))
        object.__setattr__(self, "n_samples",
                           np.ascontiguousarray(self.n_samples, np.int64))
        for name in ("feature", "threshold", "left", "right", "value",
                     "n_samples", "split_gain"):
            getattr(self, name).setflags(write=False)

    def leaf_ids(self, X: np.ndarray) -> np.ndarray:
        return _kernels.impl().traverse(
            self.feature, self.threshold, self.left, self.right,
            np.ascontiguousarray(X, np.float64), self.root,
        )

    def predict_values(self, X: np.ndarray) -> np.ndarray:
        return self.value[self.leaf_ids(X)]


def grow_regression_tree(
    X: np.ndarray,
    targets: np.ndarray,
    max_depth: int,
    min_samples_split: int = 2,
) -> tuple[RegressionTree, list[np.ndarray | None]]:
    """Variance-reduction regression tree; leaf values start as target
    means and may be overwritten by the caller (boosting installs Newton
    estimates).

    Also returns, per node id, the training row indices reaching each leaf
    (None for internal nodes) so callers can recompute leaf statistics.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    targets = np.ascontiguousarray(targets, dtype=np.float64)
    kern = _kernels.impl()

    store = _NodeStore()
    values: list[float] = []
    leaf_rows: list[np.ndarray | None] = []
    in_left = np.zeros(X.shape[0], dtype=bool)

    root_S = _presort(X)
    root = store.add(root_S.shape[1])
    values.append(0.0)
    leaf_rows.append(None)
    stack = [(root, root_S, 0)]
    while stack:
        node, S, depth = stack.pop()
        rows0 = S[0]
        n = rows0.shape[0]
        cum = np.cumsum(targets[rows0])
        total = float(cum[-1])
        values[node] = total / n
        leaf_rows[node] = rows0
        if depth >= max_depth or n < min_samples_split:
            continue
        f, thr, gain, found = kern.best_split_mse(X, targets, S, total)
        if not found or gain <= 0.0:
            continue
        rows = S[f]
        go_left = X[rows, f] <= thr
        if go_left.all() or not go_left.any():  # adjacent-float midpoint
            continue
        in_left[rows] = go_left
        S_l, S_r = _partition(S, in_left)
        store.make_internal(node, f, thr, gain)
        leaf_rows[node] = None
        left_id = store.add(S_l.shape[1])
        values.append(0.0)
        leaf_rows.append(None)
        right_id = store.add(S_r.shape[1])
        values.append(0.0)
        leaf_rows.append(None)
        store.left[node] = left_id
        store.right[node] = right_id
        stack.append((right_id, S_r, depth + 1))
        stack.append((left_id, S_l, depth + 1))

    tree = RegressionTree(
        feature=np.array(store.feature, dtype=np.int32),
        threshold=np.array(store.threshold, dtype=np.float64),
        left=np.array(store.left, dtype=np.int32),
        right=np.array(store.right, dtype=np.int32),
        value=np.array(values, dtype=np.float64),
        n_samples=np.array(store.n_samples, dtype=np.int64),
        split_gain=np.array(store.split_gain, dtype=np.float64),
        n_features=X.shape[1],
    )
    return tree, leaf_rows
