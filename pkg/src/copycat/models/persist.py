"""Model persistence: one JSON document per model.

Layout: {"family": "lr|cart|gbt|mlp|pipeline", "version": 1, "payload": {...}}.
Floats survive JSON round trips exactly (shortest-repr encoding), so
load(save(m)) reproduces predictions bit-for-bit; the round-trip tests
assert that.

Pipelines serialize only when their feature map was registered by name.
"""

from __future__ import annotations

import json

import numpy as np

from ..errors import ConfigError, DataError
from .boosting import GradientBoostedTreesModel
from .logistic import LogisticRegressionModel
from .mlp import MlpModel
from .pipeline import PipelineClassifier, named_pipeline
from .tree import LEAF, DecisionTreeModel, RegressionTree

FORMAT_VERSION = 1


def _floats(arr):
    return [float(v) for v in np.asarray(arr).ravel()]


def _lr_payload(model: LogisticRegressionModel) -> dict:
    return {"weights": _floats(model.weights), "bias": float(model.bias)}


def _lr_load(payload: dict) -> LogisticRegressionModel:
    return LogisticRegressionModel(
        np.asarray(payload["weights"], dtype=np.float64), payload["bias"]
    )


def _tree_nodes(feature, threshold, left, right, n_samples, split_gain,
                leaf_fields) -> list[dict]:
    nodes = []
    for i in range(feature.shape[0]):
        if feature[i] == LEAF:
            node = {"n_samples": int(n_samples[i])}
            node.update(leaf_fields(i))
        else:
            node = {
                "split_feature": int(feature[i]),
                "threshold": float(threshold[i]),
                "left": int(left[i]),
                "right": int(right[i]),
                "n_samples": int(n_samples[i]),
                "split_gain": float(split_gain[i]),
            }
        nodes.append(node)
    return nodes


def _cart_payload(model: DecisionTreeModel) -> dict:
    def leaf_fields(i):
        return {
            "class_histogram": [int(c) for c in model.histogram[i]],
            "label": int(model.label[i]),
        }

    return {
        "root": int(model.root),
        "input_dim": int(model.n_features),
        "class_count": int(model.class_count()),
        "nodes": _tree_nodes(model.feature, model.threshold, model.left,
                             model.right, model.n_samples, model.split_gain,
                             leaf_fields),
    }


def _read_tree_arrays(nodes, leaf_reader):
    m = len(nodes)
    feature = np.full(m, LEAF, dtype=np.int32)
    threshold = np.zeros(m)
    left = np.full(m, -1, dtype=np.int32)
    right = np.full(m, -1, dtype=np.int32)
    n_samples = np.zeros(m, dtype=np.int64)
    split_gain = np.zeros(m)
    for i, node in enumerate(nodes):
        n_samples[i] = node["n_samples"]
        if "split_feature" in node:
            feature[i] = node["split_feature"]
            threshold[i] = node["threshold"]
            left[i] = node["left"]
            right[i] = node["right"]
            split_gain[i] = node["split_gain"]
        else:
            leaf_reader(i, node)
    return feature, threshold, left, right, n_samples, split_gain


def _cart_load(payload: dict) -> DecisionTreeModel:
    nodes = payload["nodes"]
    class_count = int(payload["class_count"])
    histogram = np.zeros((len(nodes), class_count), dtype=np.int64)
    label = np.zeros(len(nodes), dtype=np.int64)

    def leaf_reader(i, node):
        histogram[i] = node["class_histogram"]
        label[i] = node["label"]

    feature, threshold, left, right, n_samples, split_gain = _read_tree_arrays(
        nodes, leaf_reader
    )
    # Internal histograms are not stored; rebuild them bottom-up so the
    # argmax-label invariant holds at every node.
    root = int(payload["root"])
    order = []
    stack = [root]
    while stack:
        node = stack.pop()
        order.append(node)
        if feature[node] != LEAF:
            stack.append(int(left[node]))
            stack.append(int(right[node]))
    for node in reversed(order):
        if feature[node] != LEAF:
            histogram[node] = histogram[left[node]] + histogram[right[node]]
            label[node] = int(histogram[node].argmax())
    return DecisionTreeModel(
        feature=feature, threshold=threshold, left=left, right=right,
        histogram=histogram, label=label, n_samples=n_samples,
        split_gain=split_gain, n_features=int(payload["input_dim"]),
        root=root,
    )


def _gbt_payload(model: GradientBoostedTreesModel) -> dict:
    trees = []
    for tree in model.trees:
        def leaf_fields(i, _tree=tree):
            return {"value": float(_tree.value[i])}

        trees.append({
            "root": int(tree.root),
            "nodes": _tree_nodes(tree.feature, tree.threshold, tree.left,
                                 tree.right, tree.n_samples, tree.split_gain,
                                 leaf_fields),
        })
    return {
        "initial_score": float(model.initial_score),
        "learning_rate": float(model.learning_rate),
        "input_dim": int(model.n_features),
        "trees": trees,
    }


def _gbt_load(payload: dict) -> GradientBoostedTreesModel:
    trees = []
    for doc in payload["trees"]:
        value = np.zeros(len(doc["nodes"]))

        def leaf_reader(i, node):
            value[i] = node["value"]

        feature, threshold, left, right, n_samples, split_gain = (
            _read_tree_arrays(doc["nodes"], leaf_reader)
        )
        trees.append(RegressionTree(
            feature=feature, threshold=threshold, left=left, right=right,
            value=value, n_samples=n_samples, split_gain=split_gain,
            n_features=int(payload["input_dim"]), root=int(doc["root"]),
        ))
    return GradientBoostedTreesModel(
        initial_score=payload["initial_score"],
        trees=tuple(trees),
        learning_rate=payload["learning_rate"],
        n_features=int(payload["input_dim"]),
    )


def _mlp_payload(model: MlpModel) -> dict:
    return {
        "input_dim": int(model.n_features),
        "class_count": int(model.n_classes),
        "weights": [[_floats(row) for row in W] for W in model.weights],
        "biases": [_floats(b) for b in model.biases],
    }


def _mlp_load(payload: dict) -> MlpModel:
    return MlpModel(
        weights=tuple(np.asarray(W, dtype=np.float64) for W in payload["weights"]),
        biases=tuple(np.asarray(b, dtype=np.float64) for b in payload["biases"]),
        n_features=int(payload["input_dim"]),
        n_classes=int(payload["class_count"]),
    )


def _pipeline_payload(model: PipelineClassifier) -> dict:
    if model.map_name is None:
        raise ConfigError(
            "pipeline feature map has no registered name; cannot serialize"
        )
    return {
        "input_dim": int(model.input_dim()),
        "feature_map": {"name": model.map_name, "params": model.map_params or {}},
        "inner": model_to_doc(model.inner),
    }


def _pipeline_load(payload: dict) -> PipelineClassifier:
    fm = payload["feature_map"]
    return named_pipeline(
        fm["name"], fm["params"], model_from_doc(payload["inner"]),
        int(payload["input_dim"]),
    )


_FAMILIES = {
    "lr": (LogisticRegressionModel, _lr_payload, _lr_load),
    "cart": (DecisionTreeModel, _cart_payload, _cart_load),
    "gbt": (GradientBoostedTreesModel, _gbt_payload, _gbt_load),
    "mlp": (MlpModel, _mlp_payload, _mlp_load),
    "pipeline": (PipelineClassifier, _pipeline_payload, _pipeline_load),
}


def model_family(model) -> str:
    for family, (cls, _, _) in _FAMILIES.items():
        if isinstance(model, cls):
            return family
    raise ConfigError(f"cannot serialize models of type {type(model).__name__}")


def model_to_doc(model) -> dict:
    family = model_family(model)
    _, to_payload, _ = _FAMILIES[family]
    return {"family": family, "version": FORMAT_VERSION, "payload": to_payload(model)}


def model_from_doc(doc: dict):
    try:
        family = doc["family"]
        version = doc["version"]
        payload = doc["payload"]
    except (KeyError, TypeError):
        raise DataError("model document needs family/version/payload") from None
    if version != FORMAT_VERSION:
        raise DataError(f"unsupported model format version {version!r}")
    if family not in _FAMILIES:
        raise DataError(f"unknown model family {family!r}")
    _, _, from_payload = _FAMILIES[family]
    return from_payload(payload)


def save_model(model, path) -> None:
    doc = model_to_doc(model)
    try:
        fh = open(path, "w", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from None
    with fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_model(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"{path} is not valid JSON: {exc}") from None
    return model_from_doc(doc)
