"""The two-step copy process and repeated-run studies.

One run: draw n_train uniform points over the region, label them with the
oracle, train an unconstrained CART copy, then score it on a disjoint
synthetic stream (fidelity = fraction of agreement with the oracle) and,
when provided, on the original test set (accuracy vs true labels and
fidelity vs the oracle).

The copy path deliberately has no regularization, pruning, or
hyperparameter search; zero synthetic training error is asserted as a hard
postcondition for unbounded trees, because synthetic labels are a
deterministic function of the sampled points. A study repeats the run with
seeds base_seed + r; runs are independent, so they may execute on any
number of worker threads without changing a single reported number.
"""

from __future__ import annotations

import json
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .data import LabeledDataset
from .errors import ConfigError, CopyIntegrityError
from .metrics import accuracy
from .models import CartConfig, Classifier, cart_train
from .sampling import DEFAULT_CHUNK, SamplingRegion, iter_uniform_chunks, label_with_oracle

COPY_FAMILIES = ("cart",)


def resolve_threads(value=None) -> int:
    """--threads flag > COPYCAT_THREADS env > machine parallelism."""
    if value is not None:
        n = int(value)
    else:
        env = os.environ.get("COPYCAT_THREADS", "").strip()
        n = int(env) if env else (os.cpu_count() or 1)
    if n < 1:
        raise ConfigError("thread count must be >= 1")
    return n


@dataclass(frozen=True)
class CopyConfig:
    n_train: int = 100_000
    n_test: int = 100_000
    margin: float = 0.05
    copy_family: str = "cart"
    copy_train_cfg: CartConfig = field(default_factory=CartConfig)
    runs: int = 30
    base_seed: int = 0
    histogram_bins: int = 20
    chunk_size: int = DEFAULT_CHUNK

    def __post_init__(self):
        if self.copy_family not in COPY_FAMILIES:
            raise ConfigError(
                f"copy_family must be one of {COPY_FAMILIES}, got "
                f"{self.copy_family!r}"
            )
        if self.n_train < 1 or self.n_test < 1:
            raise ConfigError("n_train and n_test must be >= 1")
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if self.base_seed < 0:
            raise ConfigError("base_seed must be non-negative")
        if self.histogram_bins < 1:
            raise ConfigError("histogram_bins must be >= 1")
        if self.copy_train_cfg.max_depth is not None:
            warnings.warn(
                "copy_train_cfg.max_depth is set: capacity control on the "
                "copy voids the zero-training-error guarantee",
                stacklevel=2,
            )

    def to_json_dict(self) -> dict:
        return {
            "n_train": self.n_train,
            "n_test": self.n_test,
            "margin": self.margin,
            "copy_family": self.copy_family,
            "copy_train_cfg": {
                "max_depth": self.copy_train_cfg.max_depth,
                "min_samples_split": self.copy_train_cfg.min_samples_split,
            },
            "runs": self.runs,
            "base_seed": self.base_seed,
            "histogram_bins": self.histogram_bins,
            "chunk_size": self.chunk_size,
        }


@dataclass(frozen=True, eq=False)
class CopyResult:
    """One copy run; original_test_* are None when no original test set
    was supplied."""

    copy: Classifier
    synthetic_train_accuracy: float
    synthetic_test_fidelity: float
    original_test_accuracy: float | None
    original_test_fidelity: float | None
    seed: int

    def metrics_dict(self) -> dict:
        return {
            "seed": self.seed,
            "synthetic_train_accuracy": self.synthetic_train_accuracy,
            "synthetic_test_fidelity": self.synthetic_test_fidelity,
            "original_test_accuracy": self.original_test_accuracy,
            "original_test_fidelity": self.original_test_fidelity,
        }


_METRIC_KEYS = (
    "synthetic_train_accuracy",
    "synthetic_test_fidelity",
    "original_test_accuracy",
    "original_test_fidelity",
)


def _mean_std(values: list[float]) -> dict:
    arr = np.asarray(values, dtype=np.float64)
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return {"mean": float(arr.mean()), "std": std}


@dataclass(frozen=True, eq=False)
class CopyStudy:
    results: tuple[CopyResult, ...]
    aggregates: dict
    histogram_edges: np.ndarray
    histogram_counts: np.ndarray
    config: CopyConfig

    @property
    def per_run(self) -> list[dict]:
        return [r.metrics_dict() for r in self.results]

    def mean(self, key: str) -> float:
        return self.aggregates[key]["mean"]

    def std(self, key: str) -> float:
        return self.aggregates[key]["std"]

    def median_accuracy_run(self) -> CopyResult:
        """The representative run: median original-test accuracy (lower
        middle for even run counts)."""
        accs = [r.original_test_accuracy for r in self.results]
        if any(a is None for a in accs):
            raise ConfigError("study ran without an original test set")
        order = np.argsort(np.asarray(accs), kind="stable")
        return self.results[int(order[(len(accs) - 1) // 2])]

    def to_json_dict(self) -> dict:
        return {
            "per_run": self.per_run,
            "aggregates": self.aggregates,
            "histogram": {
                "metric": "original_test_accuracy",
                "bin_edges": [float(v) for v in self.histogram_edges],
                "counts": [int(v) for v in self.histogram_counts],
            },
            "config": self.config.to_json_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)


def build_copy(oracle: Classifier, region: SamplingRegion, cfg: CopyConfig,
               seed: int, original_test: LabeledDataset | None = None) -> CopyResult:
    """One sample -> label -> train -> evaluate cycle.

    Stream 0 of `seed` feeds training, stream 1 the disjoint synthetic
    test draw, so the two never share points.
    """
    if oracle.input_dim() != region.dim:
        raise ConfigError(
            f"oracle expects {oracle.input_dim()} features, region has {region.dim}"
        )
    chunks = list(iter_uniform_chunks(region, cfg.n_train, seed, stream=0,
                                      chunk_size=cfg.chunk_size))
    points = chunks[0] if len(chunks) == 1 else np.concatenate(chunks, axis=0)
    synthetic = label_with_oracle(points, oracle, chunk_size=cfg.chunk_size)
    copy = cart_train(synthetic, cfg.copy_train_cfg)

    train_accuracy = accuracy(copy.predict_batch(points), synthetic.labels)
    if cfg.copy_train_cfg.max_depth is None and train_accuracy != 1.0:
        raise CopyIntegrityError(
            f"unbounded copy left nonzero training error ({train_accuracy});"
            " synthetic labels were not a deterministic function of the points"
        )

    agree = 0
    for chunk in iter_uniform_chunks(region, cfg.n_test, seed, stream=1,
                                     chunk_size=cfg.chunk_size):
        agree += int(np.count_nonzero(
            copy.predict_batch(chunk) == oracle.predict_batch(chunk)
        ))
    test_fidelity = agree / cfg.n_test

    original_accuracy = None
    original_fidelity = None
    if original_test is not None:
        copy_preds = copy.predict_batch(original_test.features)
        original_accuracy = accuracy(copy_preds, original_test.labels)
        original_fidelity = accuracy(
            copy_preds, oracle.predict_batch(original_test.features)
        )
    return CopyResult(
        copy=copy,
        synthetic_train_accuracy=train_accuracy,
        synthetic_test_fidelity=test_fidelity,
        original_test_accuracy=original_accuracy,
        original_test_fidelity=original_fidelity,
        seed=seed,
    )


def run_study(oracle: Classifier, region: SamplingRegion, cfg: CopyConfig,
              original_test: LabeledDataset,
              threads: int | None = None) -> CopyStudy:
    """cfg.runs independent copies with seeds base_seed + r, aggregated as
    mean +- sample std per metric plus an accuracy histogram."""
    if not isinstance(original_test, LabeledDataset):
        raise ConfigError(
            "run_study needs an original test set (use build_copy for "
            "synthetic-only evaluation)"
        )
    seeds = [cfg.base_seed + r for r in range(cfg.runs)]
    workers = resolve_threads(threads)
    if workers == 1 or cfg.runs == 1:
        results = [build_copy(oracle, region, cfg, s, original_test) for s in seeds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(
                lambda s: build_copy(oracle, region, cfg, s, original_test),
                seeds,
            ))
    aggregates = {
        key: _mean_std([getattr(r, key) for r in results])
        for key in _METRIC_KEYS
    }
    accs = np.asarray([r.original_test_accuracy for r in results])
    counts, edges = np.histogram(accs, bins=cfg.histogram_bins)
    return CopyStudy(
        results=tuple(results),
        aggregates=aggregates,
        histogram_edges=edges,
        histogram_counts=counts,
        config=cfg,
    )


def fidelity_vs_n_sweep(oracle: Classifier, region: SamplingRegion,
                        n_values, runs_per_n: int, base_seed: int,
                        original_test: LabeledDataset | None = None,
                        n_test: int = 10_000,
                        copy_train_cfg: CartConfig | None = None) -> list[dict]:
    """Synthetic-test fidelity as a function of the training draw size.

    Returns one machine-readable row per N:
    {"n": N, "mean_fidelity": m, "std_fidelity": s, "runs": r}.
    """
    n_values = [int(n) for n in n_values]
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ConfigError("n_values must be strictly increasing")
    if runs_per_n < 1:
        raise ConfigError("runs_per_n must be >= 1")
    rows = []
    for i, n in enumerate(n_values):
        cfg = CopyConfig(
            n_train=n, n_test=n_test, runs=runs_per_n,
            base_seed=base_seed + i * runs_per_n,
            copy_train_cfg=copy_train_cfg or CartConfig(),
        )
        fidelities = []
        for r in range(runs_per_n):
            result = build_copy(oracle, region, cfg, cfg.base_seed + r,
                                original_test)
            fidelities.append(result.synthetic_test_fidelity)
        stats = _mean_std(fidelities)
        rows.append({
            "n": n,
            "mean_fidelity": stats["mean"],
            "std_fidelity": stats["std"],
            "runs": runs_per_n,
        })
    return rows
