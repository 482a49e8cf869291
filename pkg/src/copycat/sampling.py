"""Uniform synthetic sampling over a feature-space box, labeled by an
oracle classifier.

Randomness contract: every stream is a PCG64 generator keyed by
SeedSequence(seed, spawn_key=(stream, chunk_index)), so samples are
bit-reproducible across platforms, chunk counts never depend on worker
scheduling, and distinct streams (e.g. a copy's train vs test draws) never
overlap. Chunked generation keeps at most chunk_size points in memory when
streaming.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .data import LabeledDataset, FeatureSpec
from .errors import ConfigError, DataError

DEFAULT_CHUNK = 65536


@dataclass(frozen=True)
class SamplingRegion:
    """Axis-aligned box: per-feature [lower, upper) sampling support."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.ascontiguousarray(self.lower, dtype=np.float64)
        hi = np.ascontiguousarray(self.upper, dtype=np.float64)
        if lo.ndim != 1 or hi.shape != lo.shape:
            raise ConfigError("lower and upper must be 1-D vectors of equal length")
        if not (lo < hi).all():
            raise ConfigError("region needs lower[i] < upper[i] for every feature")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return self.lower.shape[0]


@dataclass(frozen=True)
class SamplerConfig:
    n_samples: int = 1_000_000
    seed: int = 0
    margin: float = 0.05
    chunk_size: int = DEFAULT_CHUNK

    def __post_init__(self):
        if self.n_samples < 1:
            raise ConfigError("n_samples must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.margin < 0:
            raise ConfigError("margin must be >= 0")
        if self.chunk_size < 1:
            raise ConfigError("chunk_size must be >= 1")


def chunk_generator(seed: int, stream: int, chunk_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed),
                                spawn_key=(int(stream), int(chunk_index)))
    return np.random.Generator(np.random.PCG64(ss))


def fit_region(data: LabeledDataset, margin: float = 0.05) -> SamplingRegion:
    """Per-feature [min - margin*range, max + margin*range]; zero-range
    features widen to value +- 0.5."""
    if margin < 0:
        raise ConfigError("margin must be >= 0")
    mins = data.features.min(axis=0)
    maxs = data.features.max(axis=0)
    span = maxs - mins
    lower = mins - margin * span
    upper = maxs + margin * span
    flat = span == 0.0
    lower = np.where(flat, mins - 0.5, lower)
    upper = np.where(flat, maxs + 0.5, upper)
    return SamplingRegion(lower, upper)


def iter_uniform_chunks(region: SamplingRegion, n_samples: int, seed: int,
                        stream: int = 0, chunk_size: int = DEFAULT_CHUNK):
    """Yield (n_i, dim) matrices totaling n_samples rows, i.i.d. uniform
    per coordinate. Chunk i is a pure function of (seed, stream, i)."""
    if n_samples < 1:
        raise ConfigError("n_samples must be >= 1")
    width = region.upper - region.lower
    produced = 0
    index = 0
    while produced < n_samples:
        m = min(chunk_size, n_samples - produced)
        rng = chunk_generator(seed, stream, index)
        u = rng.random((m, region.dim))
        yield region.lower + u * width
        produced += m
        index += 1


def sample_uniform(region: SamplingRegion, cfg: SamplerConfig,
                   stream: int = 0) -> np.ndarray:
    """Materialized uniform draw: (n_samples, dim) matrix."""
    chunks = list(iter_uniform_chunks(region, cfg.n_samples, cfg.seed,
                                      stream, cfg.chunk_size))
    return chunks[0] if len(chunks) == 1 else np.concatenate(chunks, axis=0)


def _generic_schema(d: int) -> tuple[FeatureSpec, ...]:
    return tuple(FeatureSpec(f"x{i}") for i in range(d))


def label_with_oracle(points: np.ndarray, oracle, schema=None,
                      chunk_size: int = DEFAULT_CHUNK) -> LabeledDataset:
    """Synthetic dataset whose labels are the oracle's predictions, row by
    row; labels are therefore a deterministic function of the features."""
    points = np.ascontiguousarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != oracle.input_dim():
        raise DataError(
            f"points have shape {points.shape}; oracle expects "
            f"(n, {oracle.input_dim()})"
        )
    n = points.shape[0]
    labels = np.empty(n, dtype=np.int64)
    for start in range(0, n, chunk_size):
        stop = min(start + chunk_size, n)
        try:
            labels[start:stop] = oracle.predict_batch(points[start:stop])
        except Exception as exc:
            raise DataError(
                f"oracle failed while labeling rows [{start}, {stop}): {exc}"
            ) from exc
    schema = tuple(schema) if schema is not None else _generic_schema(points.shape[1])
    return LabeledDataset(points, labels, schema, oracle.class_count())


def dump_synthetic_csv(points: np.ndarray, labels: np.ndarray, schema,
                       path) -> None:
    """Audit dump: feature columns plus a synthetic_label column."""
    points = np.asarray(points)
    labels = np.asarray(labels)
    if points.shape[0] != labels.shape[0]:
        raise DataError("points and labels must have equal length")
    names = [s.name for s in schema]
    if len(names) != points.shape[1]:
        raise DataError("schema width does not match points")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(names + ["synthetic_label"])
        for row, label in zip(points, labels):
            writer.writerow([repr(float(v)) for v in row] + [int(label)])
