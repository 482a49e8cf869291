#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the pure NumPy fallback.

The two backends produce bit-identical trees (asserted here as well as in
the test suite), so this only measures speed. Run after building the
extension in place:

    python setup.py build_ext --inplace
    python benchmarks/bench_kernels.py [--sizes 10000 100000] [--features 10]
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from copycat import _kernels  # noqa: E402
from copycat.data import FeatureSpec, LabeledDataset  # noqa: E402
from copycat.models import cart_train  # noqa: E402


def synthetic_problem(n, d, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1, 1, size=(n, d))
    y = (X[:, 0] * X[:, 1] + 0.5 * X[:, 2] > 0).astype(np.int64)
    schema = tuple(FeatureSpec(f"x{i}") for i in range(d))
    return LabeledDataset(X, y, schema, 2)


def time_backend(name, data, probe, repeats):
    _kernels.set_backend(name)
    fit_times, predict_times = [], []
    tree = None
    for _ in range(repeats):
        start = time.perf_counter()
        tree = cart_train(data)
        fit_times.append(time.perf_counter() - start)
        start = time.perf_counter()
        tree.predict_batch(probe)
        predict_times.append(time.perf_counter() - start)
    return tree, min(fit_times), min(predict_times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+",
                        default=[10_000, 100_000])
    parser.add_argument("--features", type=int, default=10)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args(argv)

    backends = _kernels.available_backends()
    print(f"available backends: {backends}")
    if "compiled" not in backends:
        print("note: compiled kernels not built; timing the fallback only")

    header = f"{'rows':>9} {'backend':>9} {'fit (s)':>9} {'predict (s)':>12} {'nodes':>8}"
    print(header)
    print("-" * len(header))
    original = _kernels.active_backend()
    try:
        for n in args.sizes:
            data = synthetic_problem(n, args.features)
            probe = np.random.default_rng(1).uniform(-1, 1, size=(n, args.features))
            trees = {}
            for backend in backends:
                tree, fit_s, pred_s = time_backend(backend, data, probe,
                                                   args.repeats)
                trees[backend] = tree
                print(f"{n:>9} {backend:>9} {fit_s:>9.3f} {pred_s:>12.4f} "
                      f"{tree.node_count:>8}")
            if len(trees) == 2:
                a, b = trees["python"], trees["compiled"]
                identical = (np.array_equal(a.feature, b.feature)
                             and np.array_equal(a.threshold, b.threshold)
                             and np.array_equal(a.split_gain, b.split_gain))
                print(f"{'':>9} backends produced identical trees: {identical}")
                assert identical
    finally:
        _kernels.set_backend(original)
    return 0


if __name__ == "__main__":
    sys.exit(main())
