import numpy as np
import pytest

from copycat.errors import ConfigError
from copycat.models import (
    GbtConfig,
    LogisticRegressionModel,
    cart_train,
    gbt_train,
    impurity_feature_importance,
)
from helpers import dataset, random_consistent_dataset


def test_depth_one_tree_is_one_hot_on_its_split_feature():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(80, 5))
    y = (X[:, 3] > 0).astype(int)
    from copycat.models import CartConfig

    tree = cart_train(dataset(X, y), CartConfig(max_depth=1))
    imp = impurity_feature_importance(tree)
    assert imp[3] == 1.0
    assert imp.sum() == pytest.approx(1.0, abs=1e-12)


def test_importances_are_normalized_and_nonnegative():
    rng = np.random.default_rng(2)
    ds = random_consistent_dataset(rng, 150, 4, n_classes=3)
    imp = impurity_feature_importance(cart_train(ds))
    assert (imp >= 0).all()
    assert abs(imp.sum() - 1.0) <= 1e-12


def test_single_determining_feature_takes_all_importance():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(200, 4))
    y = (X[:, 0] > 0).astype(int)
    imp = impurity_feature_importance(cart_train(dataset(X, y)))
    assert imp[0] == 1.0
    assert imp[1] == imp[2] == imp[3] == 0.0


def test_column_permutation_permutes_importances():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(300, 4))
    y = ((X[:, 0] > 0.3) & (X[:, 2] < 0.1)).astype(int)
    perm = np.array([2, 0, 3, 1])
    base = impurity_feature_importance(cart_train(dataset(X, y)))
    permuted = impurity_feature_importance(cart_train(dataset(X[:, perm], y)))
    np.testing.assert_allclose(permuted, base[perm], atol=1e-12)


def test_gbt_importance_sums_to_one():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(250, 6))
    y = (X[:, 1] * X[:, 4] > 0).astype(int)
    model = gbt_train(dataset(X, y), GbtConfig(rounds=20))
    imp = impurity_feature_importance(model)
    assert (imp >= 0).all()
    assert abs(imp.sum() - 1.0) <= 1e-12
    assert imp[1] + imp[4] > 0.5  # the informative pair dominates


def test_non_tree_model_rejected():
    model = LogisticRegressionModel(np.array([1.0]), 0.0)
    with pytest.raises(ConfigError, match="importance requires tree model"):
        impurity_feature_importance(model)


def test_splitless_tree_reports_uniform_with_warning():
    ds = dataset([[0.0], [1.0]], [1, 1], class_count=2)  # pure: single leaf
    tree = cart_train(ds)
    with pytest.warns(UserWarning, match="uniform"):
        imp = impurity_feature_importance(tree)
    np.testing.assert_array_equal(imp, [1.0])
