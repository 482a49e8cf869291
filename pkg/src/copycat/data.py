"""Tabular dataset loading, encoding, standardization and splitting.

Conventions, fixed so that every downstream number is reproducible:

* nominal columns are encoded ordinally (category -> its first-appearance
  index), keeping one column per named attribute;
* labels are mapped to contiguous class indices in first-appearance order;
* standardization uses the population (1/M) standard deviation, and
  constant columns get their std substituted by 1 (with a warning);
* stratified splits send round-half-up(train_fraction * class_count) rows
  of each class to the train side, shuffled by a seeded PCG64 generator.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DataError

NUMERIC = "numeric"
NOMINAL = "nominal"


@dataclass(frozen=True)
class FeatureSpec:
    """Name + kind of one input column; nominal kinds carry the category
    strings in encoding order."""

    name: str
    kind: str = NUMERIC
    categories: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in (NUMERIC, NOMINAL):
            raise DataError(f"unknown feature kind {self.kind!r} for {self.name!r}")
        if self.kind == NOMINAL:
            if len(self.categories) < 1:
                raise DataError(f"nominal feature {self.name!r} needs >= 1 category")
            if len(set(self.categories)) != len(self.categories):
                raise DataError(f"duplicate categories in feature {self.name!r}")
        object.__setattr__(self, "categories", tuple(self.categories))


def _check_schema(schema):
    names = [s.name for s in schema]
    if len(set(names)) != len(names):
        raise DataError("feature names must be unique within a schema")


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Feature matrix plus integer class labels and per-column metadata.

    Immutable after construction (arrays are marked read-only), so instances
    are safe to share across threads.
    """

    features: np.ndarray
    labels: np.ndarray
    schema: tuple[FeatureSpec, ...]
    class_count: int

    def __post_init__(self):
        feats = np.ascontiguousarray(self.features, dtype=np.float64)
        labs = np.ascontiguousarray(self.labels, dtype=np.int64)
        if feats.ndim != 2:
            raise DataError("features must be a 2-D matrix")
        if labs.ndim != 1 or labs.shape[0] != feats.shape[0]:
            raise DataError("labels must be one per feature row")
        if feats.shape[0] < 1:
            raise DataError("dataset needs at least one row")
        if feats.shape[1] != len(self.schema):
            raise DataError(
                f"schema lists {len(self.schema)} features but matrix has "
                f"{feats.shape[1]} columns"
            )
        _check_schema(self.schema)
        if not np.isfinite(feats).all():
            raise DataError("features contain NaN or infinite entries")
        if self.class_count < 2:
            raise DataError("class_count must be >= 2")
        if labs.size and (labs.min() < 0 or labs.max() >= self.class_count):
            raise DataError("labels must lie in [0, class_count)")
        feats.setflags(write=False)
        labs.setflags(write=False)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labs)
        object.__setattr__(self, "schema", tuple(self.schema))

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def feature_names(self) -> list[str]:
        return [s.name for s in self.schema]

    def take(self, indices) -> "LabeledDataset":
        """Row subset as a new dataset (class_count and schema preserved)."""
        idx = np.asarray(indices, dtype=np.int64)
        return LabeledDataset(
            self.features[idx], self.labels[idx], self.schema, self.class_count
        )


@dataclass(frozen=True)
class Standardizer:
    """Per-column affine transform to zero mean / unit variance."""

    means: np.ndarray
    stds: np.ndarray

    def __post_init__(self):
        m = np.ascontiguousarray(self.means, dtype=np.float64)
        s = np.ascontiguousarray(self.stds, dtype=np.float64)
        if m.ndim != 1 or s.shape != m.shape:
            raise DataError("means and stds must be 1-D vectors of equal length")
        if not (s > 0).all():
            raise DataError("stds must be strictly positive")
        m.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "means", m)
        object.__setattr__(self, "stds", s)

    def transform(self, matrix: np.ndarray) -> np.ndarray:
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.shape[-1] != self.means.shape[0]:
            raise DataError(
                f"standardizer fitted on {self.means.shape[0]} columns, "
                f"got {matrix.shape[-1]}"
            )
        return (matrix - self.means) / self.stds

    def inverse_transform(self, matrix: np.ndarray) -> np.ndarray:
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.shape[-1] != self.means.shape[0]:
            raise DataError(
                f"standardizer fitted on {self.means.shape[0]} columns, "
                f"got {matrix.shape[-1]}"
            )
        return matrix * self.stds + self.means

    def to_json(self) -> str:
        return json.dumps(
            {"means": [float(v) for v in self.means],
             "stds": [float(v) for v in self.stds]},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "Standardizer":
        doc = json.loads(text)
        return cls(np.asarray(doc["means"]), np.asarray(doc["stds"]))


@dataclass(frozen=True)
class SplitConfig:
    train_fraction: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise DataError("train_fraction must be in (0, 1)")
        if self.seed < 0:
            raise DataError("seed must be a non-negative integer")


def encode_nominals(raw_column, spec: FeatureSpec) -> np.ndarray:
    """Replace each category string by its index in spec.categories."""
    if spec.kind != NOMINAL:
        raise DataError(f"feature {spec.name!r} is not nominal")
    index = {c: i for i, c in enumerate(spec.categories)}
    out = np.empty(len(raw_column), dtype=np.float64)
    for i, value in enumerate(raw_column):
        try:
            out[i] = index[value]
        except KeyError:
            raise DataError(
                f"unseen category {value!r} in feature {spec.name!r}"
            ) from None
    return out


def decode_nominals(encoded, spec: FeatureSpec) -> list[str]:
    """Inverse of encode_nominals for audit/round-trip checks."""
    if spec.kind != NOMINAL:
        raise DataError(f"feature {spec.name!r} is not nominal")
    out = []
    for v in np.asarray(encoded):
        i = int(v)
        if i != v or not 0 <= i < len(spec.categories):
            raise DataError(f"value {v!r} is not a category index of {spec.name!r}")
        out.append(spec.categories[i])
    return out


def _parse_numeric(cell: str, row: int, column: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise DataError(
            f"cannot parse {cell!r} as a number (row {row}, column {column!r})"
        ) from None
    if not math.isfinite(value):
        raise DataError(
            f"non-finite value {cell!r} (row {row}, column {column!r})"
        )
    return value


def load_csv(path, label_column: str, schema_hint=None) -> LabeledDataset:
    """Load a comma-delimited UTF-8 file with a mandatory header row.

    Columns whose every cell parses as a finite number are numeric; all
    others are nominal and encoded ordinally in first-appearance order.
    A schema_hint (list of FeatureSpec in column order, label excluded)
    overrides the inference. Row indices in error messages are 0-based
    over the data rows.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file, missing header row") from None
        rows = list(reader)
    if label_column not in header:
        raise DataError(f"label column {label_column!r} not found in header")
    if not rows:
        raise DataError(f"{path}: no data rows")
    label_pos = header.index(label_column)
    feature_names = [h for i, h in enumerate(header) if i != label_pos]
    width = len(header)
    for r, row in enumerate(rows):
        if len(row) != width:
            raise DataError(
                f"row {r} has {len(row)} fields, expected {width}"
            )

    raw_labels = [row[label_pos] for row in rows]
    columns = [
        [row[i] for row in rows] for i in range(width) if i != label_pos
    ]

    if schema_hint is not None:
        if [s.name for s in schema_hint] != feature_names:
            raise DataError("schema_hint names do not match the file header")
        schema = list(schema_hint)
    else:
        schema = []
        for name, col in zip(feature_names, columns):
            numeric = True
            for cell in col:
                try:
                    v = float(cell)
                except ValueError:
                    numeric = False
                    break
                if not math.isfinite(v):
                    numeric = False
                    break
            if numeric:
                schema.append(FeatureSpec(name, NUMERIC))
            else:
                cats: list[str] = []
                seen = set()
                for cell in col:
                    if cell not in seen:
                        seen.add(cell)
                        cats.append(cell)
                schema.append(FeatureSpec(name, NOMINAL, tuple(cats)))

    matrix = np.empty((len(rows), len(schema)), dtype=np.float64)
    for j, (spec, col) in enumerate(zip(schema, columns)):
        if spec.kind == NUMERIC:
            for r, cell in enumerate(col):
                matrix[r, j] = _parse_numeric(cell, r, spec.name)
        else:
            matrix[:, j] = encode_nominals(col, spec)

    class_order: list[str] = []
    seen_labels: dict[str, int] = {}
    for value in raw_labels:
        if value not in seen_labels:
            seen_labels[value] = len(class_order)
            class_order.append(value)
    if len(class_order) < 2:
        raise DataError("label column has fewer than 2 distinct classes")
    labels = np.array([seen_labels[v] for v in raw_labels], dtype=np.int64)
    return LabeledDataset(matrix, labels, tuple(schema), len(class_order))


def fit_standardizer(data: LabeledDataset) -> Standardizer:
    """Per-column mean and population (1/M) std; constant columns get
    std 1 and a warning."""
    if data.n_rows < 2:
        raise DataError("standardizer needs at least 2 rows")
    means = data.features.mean(axis=0)
    stds = data.features.std(axis=0)  # ddof=0
    constant = stds == 0.0
    if constant.any():
        names = [data.schema[i].name for i in np.flatnonzero(constant)]
        warnings.warn(
            f"constant columns {names}: std substituted by 1", stacklevel=2
        )
        stds = np.where(constant, 1.0, stds)
    return Standardizer(means, stds)


def apply_standardizer(data: LabeledDataset, s: Standardizer) -> LabeledDataset:
    """Cell-wise (x - mean) / std; labels and schema unchanged."""
    if data.n_features != s.means.shape[0]:
        raise DataError(
            f"standardizer fitted on {s.means.shape[0]} columns, dataset "
            f"has {data.n_features}"
        )
    return LabeledDataset(
        s.transform(data.features), data.labels, data.schema, data.class_count
    )


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def stratified_split(
    data: LabeledDataset, cfg: SplitConfig
) -> tuple[LabeledDataset, LabeledDataset]:
    """Seeded per-class shuffle; round-half-up(train_fraction * count) rows
    of each class go to train, remainder to test. Row order within each
    side follows the original file order."""
    for c in range(data.class_count):
        size = int((data.labels == c).sum())
        if size < 2:
            raise DataError(f"class {c} has {size} row(s); need >= 2 to split")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.seed)))
    train_parts = []
    test_parts = []
    for c in range(data.class_count):
        idx = np.flatnonzero(data.labels == c)
        n_train = _round_half_up(cfg.train_fraction * idx.size)
        if n_train < 1 or n_train >= idx.size:
            raise DataError(
                f"train_fraction {cfg.train_fraction} leaves an empty side "
                f"for class {c} ({idx.size} rows)"
            )
        perm = rng.permutation(idx.size)
        train_parts.append(idx[perm[:n_train]])
        test_parts.append(idx[perm[n_train:]])
    train_idx = np.sort(np.concatenate(train_parts))
    test_idx = np.sort(np.concatenate(test_parts))
    return data.take(train_idx), data.take(test_idx)
