"""Shared evaluation: accuracy, model agreement, importance comparison.

All functions are pure. The concentration index is the Gini coefficient
of a normalized importance vector (0 for perfectly uniform importances,
(d-1)/d for a single dominant feature); it quantifies how skewed an
importance profile is without asserting anything about it.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .errors import DataError


def accuracy(predictions, truth) -> float:
    predictions = np.asarray(predictions)
    truth = np.asarray(truth)
    if predictions.shape != truth.shape or predictions.ndim != 1:
        raise DataError(
            f"prediction/truth shapes differ: {predictions.shape} vs {truth.shape}"
        )
    if predictions.shape[0] == 0:
        raise DataError("cannot score empty vectors")
    return float(np.mean(predictions == truth))


def agreement(model_a, model_b, points) -> float:
    """Fraction of rows where both models predict the same class;
    symmetric in (a, b)."""
    points = np.ascontiguousarray(points, dtype=np.float64)
    if model_a.input_dim() != model_b.input_dim():
        raise DataError("models consume different input dimensions")
    return accuracy(model_a.predict_batch(points), model_b.predict_batch(points))


def _average_ranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.shape[0])
    sorted_vals = values[order]
    i = 0
    n = values.shape[0]
    while i < n:
        j = i
        while j + 1 < n and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0  # average rank, 1-based
        i = j + 1
    return ranks


def spearman_rank_correlation(a, b) -> float:
    """Pearson correlation of average ranks (ties share their mean rank).
    Returns 0.0 when either vector is constant."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1 or a.shape[0] < 2:
        raise DataError("need two equal-length vectors with >= 2 entries")
    ra = _average_ranks(a)
    rb = _average_ranks(b)
    da = ra - ra.mean()
    db = rb - rb.mean()
    denom = np.sqrt((da @ da) * (db @ db))
    if denom == 0.0:
        return 0.0
    return float((da @ db) / denom)


def concentration_index(importances) -> float:
    """Gini coefficient of the (normalized) importance mass.

    uniform -> 0; one-hot over d features -> (d-1)/d. Permutation- and
    scale-invariant.
    """
    v = np.asarray(importances, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] < 1:
        raise DataError("importances must be a non-empty vector")
    if (v < 0).any():
        raise DataError("importances must be nonnegative")
    total = v.sum()
    if total <= 0:
        raise DataError("importances must have positive total mass")
    v = np.sort(v / total)
    n = v.shape[0]
    i = np.arange(1, n + 1, dtype=np.float64)
    return float(((2.0 * i - n - 1.0) * v).sum() / n)


@dataclass(frozen=True, eq=False)
class ImportanceReport:
    """Original-vs-copy importances aligned by feature name, ordered by
    copy importance (descending)."""

    feature_names: tuple[str, ...]
    original: np.ndarray
    copy: np.ndarray
    order: tuple[int, ...]
    rank_correlation: float
    top_overlap: dict[int, int]
    concentration_original: float
    concentration_copy: float

    def to_json_dict(self) -> dict:
        return {
            "features": list(self.feature_names),
            "original_importance": [float(v) for v in self.original],
            "copy_importance": [float(v) for v in self.copy],
            "order_by_copy": [int(i) for i in self.order],
            "rank_correlation": float(self.rank_correlation),
            "top_overlap": {str(k): int(v) for k, v in self.top_overlap.items()},
            "concentration": {
                "original": float(self.concentration_original),
                "copy": float(self.concentration_copy),
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)

    def write_csv(self, original_path, copy_path) -> None:
        """Two-column CSV per model (feature, importance), copy order."""
        for path, vector in ((original_path, self.original), (copy_path, self.copy)):
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(["feature", "importance"])
                for i in self.order:
                    writer.writerow([self.feature_names[i], repr(float(vector[i]))])


def _top_k_overlap(a: np.ndarray, b: np.ndarray, k: int) -> int:
    k = min(k, a.shape[0])
    top_a = set(np.argsort(-a, kind="stable")[:k].tolist())
    top_b = set(np.argsort(-b, kind="stable")[:k].tolist())
    return len(top_a & top_b)


def compare_importances(original_imp, copy_imp, names) -> ImportanceReport:
    original = np.asarray(original_imp, dtype=np.float64)
    copy = np.asarray(copy_imp, dtype=np.float64)
    name_list = tuple(getattr(s, "name", s) for s in names)
    if not original.shape == copy.shape == (len(name_list),):
        raise DataError(
            f"importance vectors and names disagree: {original.shape}, "
            f"{copy.shape}, {len(name_list)} names"
        )
    order = tuple(int(i) for i in np.argsort(-copy, kind="stable"))
    return ImportanceReport(
        feature_names=name_list,
        original=original,
        copy=copy,
        order=order,
        rank_correlation=spearman_rank_correlation(original, copy),
        top_overlap={k: _top_k_overlap(original, copy, k) for k in (3, 5)},
        concentration_original=concentration_index(original),
        concentration_copy=concentration_index(copy),
    )
