"""Trainable classifiers behind one prediction interface.

Families: logistic regression, CART decision trees, gradient-boosted
trees, a small feed-forward network, and feature-map pipelines. Copies in
this package are CART trees; the interface admits other families but none
ship.
"""

from .base import Classifier, FunctionClassifier
from .boosting import GbtConfig, GradientBoostedTreesModel, gbt_predict, gbt_score, gbt_train
from .importance import impurity_feature_importance
from .logistic import LogisticRegressionModel, LrConfig, logistic_loss_and_grad, lr_predict_proba, lr_train
from .mlp import MlpConfig, MlpModel, mlp_loss_and_grads, mlp_predict, mlp_train
from .persist import load_model, model_from_doc, model_to_doc, save_model
from .pipeline import PipelineClassifier, build_feature_map, named_pipeline, pipeline_classifier, register_feature_map
from .tree import CartConfig, DecisionTreeModel, RegressionTree, cart_predict, cart_train, grow_regression_tree

__all__ = [
    "CartConfig",
    "Classifier",
    "DecisionTreeModel",
    "FunctionClassifier",
    "GbtConfig",
    "GradientBoostedTreesModel",
    "LogisticRegressionModel",
    "LrConfig",
    "MlpConfig",
    "MlpModel",
    "PipelineClassifier",
    "RegressionTree",
    "build_feature_map",
    "cart_predict",
    "cart_train",
    "gbt_predict",
    "gbt_score",
    "gbt_train",
    "grow_regression_tree",
    "impurity_feature_importance",
    "load_model",
    "logistic_loss_and_grad",
    "lr_predict_proba",
    "lr_train",
    "mlp_loss_and_grads",
    "mlp_predict",
    "mlp_train",
    "model_from_doc",
    "model_to_doc",
    "named_pipeline",
    "pipeline_classifier",
    "register_feature_map",
    "save_model",
]
