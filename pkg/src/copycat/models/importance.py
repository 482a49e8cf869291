"""Impurity-based feature importances for tree models.

Every split contributed its count-weighted impurity decrease (Gini for
classification splits, variance for boosted regression splits) at training
time; importances accumulate those per feature, summed over all trees, and
normalize to total 1. A model that never split anything (all-zero gains)
gets the uniform vector and a warning.
"""

from __future__ import annotations

import warnings

import numpy as np

from ..errors import ConfigError
from .boosting import GradientBoostedTreesModel
from .tree import DecisionTreeModel


def _accumulate(total, feature, split_gain):
    internal = feature >= 0
    np.add.at(total, feature[internal], split_gain[internal])


def impurity_feature_importance(model) -> np.ndarray:
    """Length-d nonnegative vector summing to 1; raises ConfigError for
    models without tree structure."""
    if isinstance(model, DecisionTreeModel):
        total = np.zeros(model.input_dim())
        _accumulate(total, model.feature, model.split_gain)
    elif isinstance(model, GradientBoostedTreesModel):
        total = np.zeros(model.input_dim())
        for tree in model.trees:
            _accumulate(total, tree.feature, tree.split_gain)
    else:
        raise ConfigError("importance requires tree model")
    total = np.maximum(total, 0.0)  # guard float noise in zero-gain splits
    mass = total.sum()
    if mass <= 0.0:
        warnings.warn(
            "model has no informative splits; importance set to uniform",
            stacklevel=2,
        )
        return np.full(model.input_dim(), 1.0 / model.input_dim())
    return total / mass
