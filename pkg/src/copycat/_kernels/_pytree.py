"""Pure NumPy implementations of the hot split-scan / traversal kernels.

These are the reference semantics for the compiled backend in
``_ctree.pyx``. The two must stay bit-identical: candidate impurity
proxies are accumulated class-by-class in index order, gains are computed
as ``(left + right) - parent``, thresholds as ``(lo + hi) * 0.5``, and the
first strict improvement wins every tie (lowest feature index, then lowest
threshold). Do not "simplify" floating-point expressions here without
mirroring the change in the .pyx file.

Split scores are count-weighted impurity decreases:

* classification: sum_k cL_k^2/nL + sum_k cR_k^2/nR - sum_k c_k^2/n,
  which equals n times the Gini impurity decrease of the split;
* regression:     SL^2/nL + SR^2/nR - S^2/n,
  which equals n times the variance decrease.
"""

import numpy as np


def best_split_gini(X, y, sorted_rows, n_classes):
    """Best (feature, threshold) over one node by Gini decrease.

    sorted_rows is a (d, n) int32 matrix; row f lists the node's sample
    row ids ordered ascending by feature f. Returns
    (feature, threshold, gain, found); found is False when no feature has
    two distinct values (gain/threshold are then meaningless).
    """
    d, n = sorted_rows.shape
    best_feature = -1
    best_threshold = 0.0
    best_gain = -np.inf
    found = False

    rows0 = sorted_rows[0]
    counts_total = np.bincount(y[rows0], minlength=n_classes).astype(np.int64)
    n_f = float(n)
    parent = 0.0
    for k in range(n_classes):
        tk = float(counts_total[k])
        parent = parent + tk * tk / n_f

    for f in range(d):
        rows = sorted_rows[f]
        values = X[rows, f]
        boundaries = np.flatnonzero(values[:-1] != values[1:])
        if boundaries.size == 0:
            continue
        found = True
        onehot = y[rows, None] == np.arange(n_classes)[None, :]
        cum = np.cumsum(onehot, axis=0, dtype=np.int64)
        counts_left = cum[boundaries]
        counts_right = counts_total[None, :] - counts_left
        n_left = (boundaries + 1).astype(np.float64)
        n_right = n_f - n_left
        proxy_left = np.zeros(boundaries.size)
        proxy_right = np.zeros(boundaries.size)
        for k in range(n_classes):
            clk = counts_left[:, k].astype(np.float64)
            proxy_left = proxy_left + clk * clk / n_left
            crk = counts_right[:, k].astype(np.float64)
            proxy_right = proxy_right + crk * crk / n_right
        gains = (proxy_left + proxy_right) - parent
        j = int(np.argmax(gains))  # first max: lowest threshold wins ties
        gain = float(gains[j])
        if gain > best_gain:
            best_gain = gain
            best_feature = f
            i = boundaries[j]
            best_threshold = (values[i] + values[i + 1]) * 0.5
    return best_feature, best_threshold, best_gain, found


def best_split_mse(X, targets, sorted_rows, total_sum):
    """Best (feature, threshold) over one node by variance decrease.

    total_sum must be the node target sum accumulated in sorted_rows[0]
    order (both backends then share one parent term bit-exactly).
    """
    d, n = sorted_rows.shape
    best_feature = -1
    best_threshold = 0.0
    best_gain = -np.inf
    found = False

    n_f = float(n)
    parent = total_sum * total_sum / n_f

    for f in range(d):
        rows = sorted_rows[f]
        values = X[rows, f]
        boundaries = np.flatnonzero(values[:-1] != values[1:])
        if boundaries.size == 0:
            continue
        found = True
        cum = np.cumsum(targets[rows])
        sum_left = cum[boundaries]
        sum_right = total_sum - sum_left
        n_left = (boundaries + 1).astype(np.float64)
        n_right = n_f - n_left
        proxy_left = sum_left * sum_left / n_left
        proxy_right = sum_right * sum_right / n_right
        gains = (proxy_left + proxy_right) - parent
        j = int(np.argmax(gains))
        gain = float(gains[j])
        if gain > best_gain:
            best_gain = gain
            best_feature = f
            i = boundaries[j]
            best_threshold = (values[i] + values[i + 1]) * 0.5
    return best_feature, best_threshold, best_gain, found


def traverse(feature, threshold, left, right, X, root):
    """Route every row of X to a leaf; returns leaf node ids (int32).

    Internal nodes have feature >= 0; routing is `value <= threshold goes
    left`. Only comparisons are involved, so backends agree trivially.
    """
    n = X.shape[0]
    out = np.full(n, root, dtype=np.int32)
    active = np.flatnonzero(feature[out] >= 0)
    while active.size:
        node = out[active]
        f = feature[node]
        go_left = X[active, f] <= threshold[node]
        out[active] = np.where(go_left, left[node], right[node])
        active = active[feature[out[active]] >= 0]
    return out
