"""Command-line frontend.

Subcommands: train (fit an original model on a CSV), copy (run a repeated
copy study against a saved oracle), scenario (the bundled end-to-end
studies), importance (dump tree importances as CSV).

Exit codes: 0 success, 1 data/validation error, 2 usage error. Outputs are
byte-identical given identical inputs and flags; --threads only changes
how fast a study runs, never what it reports.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys


from .copying import CopyConfig, run_study
from .data import SplitConfig, Standardizer, apply_standardizer, fit_standardizer, load_csv, stratified_split
from .errors import ConfigError, CopycatError
from .metrics import accuracy
from .models import (
    CartConfig,
    GbtConfig,
    LrConfig,
    MlpConfig,
    cart_train,
    gbt_train,
    impurity_feature_importance,
    load_model,
    lr_train,
    mlp_train,
    save_model,
)
from .sampling import fit_region
from .scenarios import (
    CreditGenConfig,
    ScenarioConfig,
    generate_credit_like,
    run_scenario1,
    run_scenario2,
    run_toy,
    write_report_files,
)

CONFIG_VERSION = 1

# Allowed keys per config-file section; unknown keys are rejected by name.
_CONFIG_SECTIONS = {
    "train": {
        "lr": {"learning_rate", "iterations", "l2_penalty"},
        "cart": {"max_depth", "min_samples_split"},
        "gbt": {"rounds", "tree_depth", "learning_rate"},
        "mlp": {"hidden_sizes", "learning_rate", "epochs", "batch_size", "seed"},
    },
    "sampler": {"n_samples", "seed", "margin", "chunk_size"},
    "copy": {"n_train", "n_test", "margin", "runs", "base_seed",
             "histogram_bins", "max_depth", "min_samples_split"},
    "credit": {"n_rows", "default_rate", "seed", "d_raw"},
}


def _reject_unknown(doc: dict, allowed, context: str) -> None:
    for key in doc:
        if key not in allowed:
            raise ConfigError(f"unknown config key {context}{key!r}")


def load_run_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot open config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    if "version" not in doc:
        raise ConfigError("config is missing the 'version' key")
    if doc["version"] != CONFIG_VERSION:
        raise ConfigError(f"config version must equal {CONFIG_VERSION}")
    _reject_unknown(doc, set(_CONFIG_SECTIONS) | {"version"}, "")
    for section, allowed in _CONFIG_SECTIONS.items():
        sub = doc.get(section, {})
        if not isinstance(sub, dict):
            raise ConfigError(f"config section {section!r} must be an object")
        if section == "train":
            _reject_unknown(sub, allowed, f"{section}.")
            for family, keys in allowed.items():
                fam = sub.get(family, {})
                if not isinstance(fam, dict):
                    raise ConfigError(f"config section train.{family} must be an object")
                _reject_unknown(fam, keys, f"train.{family}.")
        else:
            _reject_unknown(sub, allowed, f"{section}.")
    return doc


def _train_config(family: str, doc: dict, seed: int):
    section = doc.get("train", {}).get(family, {})
    if family == "lr":
        return LrConfig(**section)
    if family == "cart":
        return CartConfig(**section)
    if family == "gbt":
        return GbtConfig(**section)
    if family == "mlp":
        if "hidden_sizes" in section:
            section = dict(section, hidden_sizes=tuple(section["hidden_sizes"]))
        section.setdefault("seed", seed)
        return MlpConfig(**section)
    raise ConfigError(f"unknown model family {family!r}")


_TRAINERS = {"lr": lr_train, "cart": cart_train, "gbt": gbt_train, "mlp": mlp_train}


def _standardizer_path(model_path: str) -> str:
    stem, _ = os.path.splitext(model_path)
    return stem + "_standardizer.json"


def _open_out(path, newline=None):
    try:
        return open(path, "w", newline=newline, encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from None


def cmd_train(args) -> int:
    doc = load_run_config(args.config)
    data = load_csv(args.data, args.label)
    scaler = fit_standardizer(data)
    scaled = apply_standardizer(data, scaler)
    test = None
    if args.split is not None:
        train, test = stratified_split(scaled, SplitConfig(args.split, args.seed))
    else:
        train = scaled
    cfg = _train_config(args.model, doc, args.seed)
    model = _TRAINERS[args.model](train, cfg)
    save_model(model, args.out)
    with _open_out(_standardizer_path(args.out)) as fh:
        fh.write(scaler.to_json())
        fh.write("\n")
    print(f"model: {args.model}, rows: {train.n_rows}, features: {train.n_features}")
    print(f"train accuracy: {accuracy(model.predict_batch(train.features), train.labels):.6f}")
    if test is not None:
        print(f"test accuracy: {accuracy(model.predict_batch(test.features), test.labels):.6f}")
    return 0


def cmd_copy(args) -> int:
    doc = load_run_config(args.config)
    section = dict(doc.get("copy", {}))
    tree_cfg = CartConfig(
        max_depth=section.pop("max_depth", None),
        min_samples_split=section.pop("min_samples_split", 2),
    )
    merged = {
        "n_train": 100_000, "n_test": None, "margin": 0.05, "runs": 30,
        "base_seed": 0, "histogram_bins": 20,
        "chunk_size": doc.get("sampler", {}).get("chunk_size", 65536),
    }
    merged.update(section)
    if args.n is not None:
        merged["n_train"] = args.n
    if args.n_test is not None:
        merged["n_test"] = args.n_test
    if args.runs is not None:
        merged["runs"] = args.runs
    if args.seed is not None:
        merged["base_seed"] = args.seed
    if args.margin is not None:
        merged["margin"] = args.margin
    if merged["n_test"] is None:
        merged["n_test"] = merged["n_train"]

    oracle = load_model(args.oracle)
    data = load_csv(args.data, args.label)
    if args.standardizer:
        try:
            with open(args.standardizer, encoding="utf-8") as fh:
                scaler = Standardizer.from_json(fh.read())
        except OSError as exc:
            raise ConfigError(
                f"cannot open standardizer {args.standardizer}: {exc}"
            ) from None
        data = apply_standardizer(data, scaler)
    cfg = CopyConfig(
        n_train=merged["n_train"], n_test=merged["n_test"],
        margin=merged["margin"], copy_train_cfg=tree_cfg,
        runs=merged["runs"], base_seed=merged["base_seed"],
        histogram_bins=merged["histogram_bins"],
        chunk_size=merged["chunk_size"],
    )
    region = fit_region(data, cfg.margin)
    study = run_study(oracle, region, cfg, data, threads=args.threads)
    out_doc = study.to_json_dict()
    out_doc["inputs"] = {"oracle": args.oracle, "data": args.data,
                         "label": args.label}
    with _open_out(args.out) as fh:
        json.dump(out_doc, fh, sort_keys=True, indent=2)
        fh.write("\n")
    mean = study.mean("original_test_accuracy")
    std = study.std("original_test_accuracy")
    print(f"copy accuracy: {mean:.4f} ± {std:.4f}")
    print(f"copy fidelity (synthetic test): "
          f"{study.mean('synthetic_test_fidelity'):.4f} ± "
          f"{study.std('synthetic_test_fidelity'):.4f}")
    return 0


def cmd_scenario(args) -> int:
    overrides = {}
    if args.runs is not None:
        overrides["runs"] = args.runs
    if args.n_synthetic is not None:
        overrides["n_synthetic"] = args.n_synthetic
    cfg = ScenarioConfig(seed=args.seed, threads=args.threads,
                         paper_scale=args.paper_scale, **overrides)
    if args.name == "toy":
        report = run_toy(cfg)
    else:
        gen_cfg = CreditGenConfig(n_rows=args.rows, seed=args.seed)
        data = generate_credit_like(gen_cfg)
        runner = run_scenario1 if args.name == "scenario1" else run_scenario2
        report = runner(data, cfg, gen_cfg)
    written = write_report_files(report, args.out)
    mean = report.study.mean("original_test_accuracy")
    std = report.study.std("original_test_accuracy")
    print(f"original accuracy: {report.original_accuracy:.4f}")
    for name, value in sorted(report.baselines.items()):
        print(f"baseline {name}: {value:.4f}")
    print(f"copy accuracy: {mean:.4f} ± {std:.4f}")
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_importance(args) -> int:
    model = load_model(args.model)
    importances = impurity_feature_importance(model)
    with _open_out(args.out, newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["feature", "importance"])
        for i, value in enumerate(importances):
            writer.writerow([f"x{i}", repr(float(value))])
    print(f"wrote {args.out} ({importances.shape[0]} features)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="copycat",
        description="Copy trained classifiers into interpretable decision "
                    "trees by uniform sampling and oracle labeling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train an original model on a CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--label", required=True, help="label column name")
    p.add_argument("--model", required=True, choices=sorted(_TRAINERS))
    p.add_argument("--config", default=None, help="RunConfig JSON path")
    p.add_argument("--out", required=True, help="model JSON output path")
    p.add_argument("--split", type=float, default=None,
                   help="train fraction; prints test accuracy when given")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("copy", help="copy a saved oracle model")
    p.add_argument("--oracle", required=True, help="model JSON path")
    p.add_argument("--data", required=True, help="CSV in the oracle's input space")
    p.add_argument("--label", required=True)
    p.add_argument("--standardizer", default=None,
                   help="apply this saved standardizer to the CSV first")
    p.add_argument("--n", type=int, default=None, help="synthetic train size")
    p.add_argument("--n-test", type=int, default=None,
                   help="synthetic test size (default: same as --n)")
    p.add_argument("--runs", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--margin", type=float, default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True, help="study JSON output path")
    p.set_defaults(fn=cmd_copy)

    p = sub.add_parser("scenario", help="run a bundled end-to-end scenario")
    p.add_argument("name", choices=["toy", "scenario1", "scenario2"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--paper-scale", action="store_true",
                   help="full-scale settings: 10^6 synthetic samples, 100 runs")
    p.add_argument("--runs", type=int, default=None)
    p.add_argument("--n-synthetic", type=int, default=None)
    p.add_argument("--rows", type=int, default=1328,
                   help="credit-like generator rows (scenario1/2)")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=cmd_scenario)

    p = sub.add_parser("importance", help="dump tree-model importances as CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_importance)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CopycatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
