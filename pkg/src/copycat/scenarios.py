"""End-to-end study runners on bundled synthetic data.

Three scenarios ship:

* ``run_scenario1``: an engineered-feature + logistic-regression pipeline
  is copied by a raw-attribute decision tree, demonstrating that the copy
  restores explanations on the 19 raw attributes even though the original
  system internally consumes 6 engineered ones.
* ``run_scenario2``: a gradient-boosted tree on the raw attributes is
  copied by a decision tree; the report compares accuracies against a raw
  logistic-regression baseline and aligns the two models' feature
  importances.
* ``run_toy``: on a 2-D interleaved-arcs problem, a small neural network
  is copied by a tree, and a label grid is emitted for decision-boundary
  plots.

The credit-like generator and the 4 engineered variables are documented
synthetic stand-ins (real credit portfolios are not shippable); every
report echoes that note plus the full configuration, and all numbers are
reproducible bit-exactly from the echoed seeds.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .copying import CopyConfig, CopyStudy, run_study
from .data import (
    NOMINAL,
    FeatureSpec,
    LabeledDataset,
    SplitConfig,
    Standardizer,
    apply_standardizer,
    fit_standardizer,
    stratified_split,
)
from .errors import ConfigError
from .metrics import ImportanceReport, accuracy, compare_importances
from .models import (
    CartConfig,
    GbtConfig,
    LrConfig,
    MlpConfig,
    gbt_train,
    impurity_feature_importance,
    lr_train,
    mlp_train,
    named_pipeline,
    register_feature_map,
)
from .sampling import fit_region

PAPER_SCALE_N = 1_000_000
PAPER_SCALE_RUNS = 100

STAND_IN_NOTE = (
    "credit-like attributes and engineered variables are documented "
    "synthetic stand-ins, not real portfolio data"
)

# ---------------------------------------------------------------------------
# Credit-like generator: 19 attributes, nonlinear default-risk score.
# ---------------------------------------------------------------------------

CREDIT_SCHEMA = (
    FeatureSpec("age"),
    FeatureSpec("economy_level", NOMINAL, ("low", "mid", "high", "very_high")),
    FeatureSpec("income_monthly"),
    FeatureSpec("loan_amount"),
    FeatureSpec("loan_term_months"),
    FeatureSpec("interest_rate"),
    FeatureSpec("employment_years"),
    FeatureSpec("employment_type", NOMINAL,
                ("salaried", "self_employed", "informal", "retired")),
    FeatureSpec("dependents"),
    FeatureSpec("housing_status", NOMINAL, ("rent", "own", "mortgage", "family")),
    FeatureSpec("monthly_expenses"),
    FeatureSpec("savings_balance"),
    FeatureSpec("existing_debt"),
    FeatureSpec("credit_lines"),
    FeatureSpec("late_payments_12m"),
    FeatureSpec("utilization_ratio"),
    FeatureSpec("years_at_address"),
    FeatureSpec("region", NOMINAL, ("north", "center", "south", "metro")),
    FeatureSpec("vehicle_owned", NOMINAL, ("no", "yes")),
)

NOISE_SIGMA = 0.5
_ECONOMY_EFFECT = np.array([0.75, -0.55, 0.20, -0.90])
_REGION_EFFECT = np.array([0.20, -0.25, 0.30, -0.15])
_EMPLOYMENT_EFFECT = np.array([-0.10, 0.10, 0.30, 0.00])


def _age_risk_curve(age: np.ndarray) -> np.ndarray:
    """U-shaped age risk: lowest near 42, clipped far from it."""
    return np.minimum(((age - 42.0) / 13.0) ** 2, 3.0)


@dataclass(frozen=True)
class CreditGenConfig:
    n_rows: int = 1328
    default_rate: float = 0.23
    seed: int = 0
    d_raw: int = 19

    def __post_init__(self):
        if self.n_rows < 1:
            raise ConfigError("n_rows must be >= 1")
        if not 0.0 < self.default_rate < 1.0:
            raise ConfigError("default_rate must be in (0, 1)")
        if self.d_raw != len(CREDIT_SCHEMA):
            raise ConfigError(
                f"the bundled credit-like schema has exactly "
                f"{len(CREDIT_SCHEMA)} attributes"
            )

    def to_json_dict(self) -> dict:
        return {
            "n_rows": self.n_rows,
            "default_rate": self.default_rate,
            "seed": self.seed,
            "d_raw": self.d_raw,
        }


def _risk_score(raw: np.ndarray, noise: np.ndarray) -> np.ndarray:
    """Fixed sparse nonlinear score behind the labels. Higher = riskier.

    Deliberately mixes pieces a linear model cannot represent (the age
    U-curve, non-monotone category effects, a J-shaped utilization term,
    thresholded ratios) with mild monotone effects, plus additive noise.
    """
    age = raw[:, 0]
    econ = raw[:, 1].astype(np.int64)
    income = raw[:, 2]
    loan = raw[:, 3]
    rate = raw[:, 5]
    emp_years = raw[:, 6]
    emp_type = raw[:, 7].astype(np.int64)
    expenses = raw[:, 10]
    savings = raw[:, 11]
    debt = raw[:, 12]
    late = raw[:, 14]
    util = raw[:, 15]
    region = raw[:, 17].astype(np.int64)

    debt_to_income = debt / (income + 1.0)
    payment_burden = loan * (rate / 100.0) / (12.0 * (income + 1.0))
    savings_buffer = savings / (expenses + 1.0)

    return (
        1.60 * _age_risk_curve(age)
        + _ECONOMY_EFFECT[econ]
        + _REGION_EFFECT[region]
        + 0.80 * np.tanh(4.0 * (util - 0.55))
        + 0.30 * np.tanh(3.0 * (0.12 - util))
        + 0.55 * np.tanh(1.5 * (late - 1.5))
        + 0.45 * np.tanh(3.0 * (debt_to_income - 0.9))
        + 0.35 * np.tanh(6.0 * (payment_burden - 0.12))
        - 0.30 * np.tanh(2.5 * (savings_buffer - 0.5))
        - 0.25 * np.tanh(emp_years / 6.0)
        + _EMPLOYMENT_EFFECT[emp_type]
        + noise
    )


def generate_credit_like(cfg: CreditGenConfig) -> LabeledDataset:
    """Deterministic synthetic loan-application table.

    The label marks default (class 1). Labels go to the top
    round(default_rate * n_rows) risk scores, so the prevalence matches the
    configured rate up to integer rounding for every seed.
    """
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.seed)))
    n = cfg.n_rows
    cols = np.empty((n, len(CREDIT_SCHEMA)))
    cols[:, 0] = rng.uniform(21.0, 75.0, n)                              # age
    cols[:, 1] = rng.choice(4, n, p=[0.30, 0.40, 0.20, 0.10])            # economy_level
    cols[:, 2] = np.exp(rng.normal(9.8, 0.55, n))                        # income_monthly
    cols[:, 3] = np.exp(rng.normal(12.3, 0.50, n))                       # loan_amount
    cols[:, 4] = rng.choice([120, 180, 240, 300, 360], n,
                            p=[0.10, 0.20, 0.30, 0.20, 0.20])            # loan_term_months
    cols[:, 5] = rng.uniform(7.0, 15.0, n)                               # interest_rate
    cols[:, 6] = np.minimum(rng.exponential(7.0, n), 40.0)               # employment_years
    cols[:, 7] = rng.choice(4, n, p=[0.55, 0.25, 0.12, 0.08])            # employment_type
    cols[:, 8] = np.minimum(rng.poisson(1.4, n), 6)                      # dependents
    cols[:, 9] = rng.choice(4, n, p=[0.35, 0.25, 0.20, 0.20])            # housing_status
    cols[:, 10] = cols[:, 2] * rng.uniform(0.45, 0.95, n)                # monthly_expenses
    cols[:, 11] = np.exp(rng.normal(8.5, 1.2, n))                        # savings_balance
    cols[:, 12] = np.exp(rng.normal(9.5, 1.1, n))                        # existing_debt
    cols[:, 13] = np.minimum(rng.poisson(3.0, n), 12)                    # credit_lines
    cols[:, 14] = np.minimum(rng.poisson(0.9, n), 8)                     # late_payments_12m
    cols[:, 15] = rng.beta(2.0, 3.0, n)                                  # utilization_ratio
    cols[:, 16] = np.minimum(rng.exponential(6.0, n), 30.0)              # years_at_address
    cols[:, 17] = rng.choice(4, n, p=[0.20, 0.30, 0.20, 0.30])           # region
    cols[:, 18] = rng.choice(2, n, p=[0.45, 0.55])                       # vehicle_owned

    noise = rng.normal(0.0, NOISE_SIGMA, n)
    scores = _risk_score(cols, noise)
    n_default = int(np.floor(cfg.default_rate * n + 0.5))
    if n_default < 2 or n - n_default < 2:
        raise ConfigError(
            f"n_rows={n} at default_rate={cfg.default_rate} leaves a class "
            "with fewer than 2 rows; increase n_rows"
        )
    labels = np.zeros(n, dtype=np.int64)
    riskiest = np.argsort(-scores, kind="stable")[:n_default]
    labels[riskiest] = 1
    return LabeledDataset(cols, labels, CREDIT_SCHEMA, 2)


# ---------------------------------------------------------------------------
# Scenario 1 feature engineering (documented stand-ins).
# ---------------------------------------------------------------------------

ENGINEERED_NAMES = (
    "debt_to_income",
    "payment_burden",
    "delinquency_intensity",
    "age_risk_curve",
    "age",
    "economy_level",
)


def engineer_credit_features(raw: np.ndarray) -> np.ndarray:
    """The 4 engineered variables (ratios/products/curves of raw
    attributes) plus age and economy_level, in ENGINEERED_NAMES order."""
    income = raw[:, 2]
    loan = raw[:, 3]
    rate = raw[:, 5]
    debt = raw[:, 12]
    late = raw[:, 14]
    util = raw[:, 15]
    return np.column_stack([
        debt / (income + 1.0),
        loan * (rate / 100.0) / (12.0 * (income + 1.0)),
        late * util,
        _age_risk_curve(raw[:, 0]),
        raw[:, 0],
        raw[:, 1],
    ])


def _credit_engineered_map(params: dict):
    raw_scaler = Standardizer(np.asarray(params["raw_means"]),
                              np.asarray(params["raw_stds"]))
    eng_scaler = Standardizer(np.asarray(params["eng_means"]),
                              np.asarray(params["eng_stds"]))

    def mapper(X_std: np.ndarray) -> np.ndarray:
        raw = raw_scaler.inverse_transform(X_std)
        return eng_scaler.transform(engineer_credit_features(raw))

    return mapper


register_feature_map("credit_engineered", _credit_engineered_map)


def _matrix_scaler(matrix: np.ndarray) -> Standardizer:
    means = matrix.mean(axis=0)
    stds = matrix.std(axis=0)
    return Standardizer(means, np.where(stds == 0.0, 1.0, stds))


# ---------------------------------------------------------------------------
# Scenario configuration and report.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScenarioConfig:
    seed: int = 0
    n_synthetic: int = 100_000
    runs: int = 30
    margin: float = 0.05
    histogram_bins: int = 20
    threads: int | None = None
    grid_resolution: int = 100
    toy_points: int = 1200
    toy_noise: float = 0.18
    paper_scale: bool = False

    def effective_n(self) -> int:
        return PAPER_SCALE_N if self.paper_scale else self.n_synthetic

    def effective_runs(self) -> int:
        return PAPER_SCALE_RUNS if self.paper_scale else self.runs

    def to_json_dict(self) -> dict:
        # threads deliberately excluded: outputs are independent of them
        return {
            "seed": self.seed,
            "n_synthetic": self.effective_n(),
            "runs": self.effective_runs(),
            "margin": self.margin,
            "histogram_bins": self.histogram_bins,
            "grid_resolution": self.grid_resolution,
            "toy_points": self.toy_points,
            "toy_noise": self.toy_noise,
            "paper_scale": self.paper_scale,
        }

    def copy_config(self, base_seed: int) -> CopyConfig:
        return CopyConfig(
            n_train=self.effective_n(),
            n_test=self.effective_n(),
            margin=self.margin,
            copy_train_cfg=CartConfig(),
            runs=self.effective_runs(),
            base_seed=base_seed,
            histogram_bins=self.histogram_bins,
        )


@dataclass(frozen=True, eq=False)
class ScenarioReport:
    name: str
    original_accuracy: float
    baselines: dict
    study: CopyStudy
    importance: ImportanceReport | None
    config: dict
    extras: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        doc = {
            "scenario": self.name,
            "original_test_accuracy": float(self.original_accuracy),
            "baselines": {k: float(v) for k, v in self.baselines.items()},
            "copy_study": self.study.to_json_dict(),
            "config": self.config,
            "note": STAND_IN_NOTE,
        }
        if self.importance is not None:
            doc["importance"] = self.importance.to_json_dict()
        for key, value in self.extras.items():
            if isinstance(value, (int, float, str)):
                doc.setdefault("details", {})[key] = value
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)


def _prepare_credit(data: LabeledDataset, seed: int):
    scaler = fit_standardizer(data)
    scaled = apply_standardizer(data, scaler)
    train, test = stratified_split(scaled, SplitConfig(0.8, seed))
    return scaler, train, test


def _majority_accuracy(test: LabeledDataset) -> float:
    counts = np.bincount(test.labels, minlength=test.class_count)
    return float(counts.max() / test.n_rows)


# ---------------------------------------------------------------------------
# Scenario runners.
# ---------------------------------------------------------------------------


def run_scenario1(data: LabeledDataset, cfg: ScenarioConfig,
                  gen_cfg: CreditGenConfig | None = None) -> ScenarioReport:
    """Engineered-feature LR pipeline copied on the raw attributes."""
    if tuple(s.name for s in data.schema) != tuple(s.name for s in CREDIT_SCHEMA):
        raise ConfigError("scenario 1 expects the bundled credit-like schema")
    scaler, train, test = _prepare_credit(data, cfg.seed)

    eng_train = engineer_credit_features(scaler.inverse_transform(train.features))
    eng_scaler = _matrix_scaler(eng_train)
    eng_schema = tuple(FeatureSpec(n) for n in ENGINEERED_NAMES)
    eng_dataset = LabeledDataset(
        eng_scaler.transform(eng_train), train.labels, eng_schema, 2
    )
    lr_model = lr_train(eng_dataset, LrConfig())
    oracle = named_pipeline(
        "credit_engineered",
        {
            "raw_means": [float(v) for v in scaler.means],
            "raw_stds": [float(v) for v in scaler.stds],
            "eng_means": [float(v) for v in eng_scaler.means],
            "eng_stds": [float(v) for v in eng_scaler.stds],
        },
        lr_model,
        input_dim=data.n_features,
    )
    # decomposability is structural: the copy consumes all raw attributes
    assert oracle.input_dim() == data.n_features
    assert lr_model.input_dim() == len(ENGINEERED_NAMES)

    region = fit_region(train, cfg.margin)
    study = run_study(oracle, region, cfg.copy_config(cfg.seed), test,
                      threads=cfg.threads)
    original_accuracy = accuracy(oracle.predict_batch(test.features), test.labels)
    return ScenarioReport(
        name="scenario1",
        original_accuracy=original_accuracy,
        baselines={"majority_class": _majority_accuracy(test)},
        study=study,
        importance=None,
        config={
            "scenario": "scenario1",
            "generator": (gen_cfg or CreditGenConfig(seed=cfg.seed)).to_json_dict(),
            "run": cfg.to_json_dict(),
            "engineered_variables": list(ENGINEERED_NAMES),
        },
        extras={
            "oracle_input_dim": int(oracle.input_dim()),
            "engineered_dim": int(lr_model.input_dim()),
        },
    )


def run_scenario2(data: LabeledDataset, cfg: ScenarioConfig,
                  gen_cfg: CreditGenConfig | None = None) -> ScenarioReport:
    """Gradient-boosted original on raw attributes, tree copy, importance
    comparison against the median-accuracy copy."""
    if tuple(s.name for s in data.schema) != tuple(s.name for s in CREDIT_SCHEMA):
        raise ConfigError("scenario 2 expects the bundled credit-like schema")
    _, train, test = _prepare_credit(data, cfg.seed)

    gbt_model = gbt_train(train, GbtConfig())
    raw_lr = lr_train(train, LrConfig())
    region = fit_region(train, cfg.margin)
    study = run_study(gbt_model, region, cfg.copy_config(cfg.seed), test,
                      threads=cfg.threads)
    representative = study.median_accuracy_run()
    importance = compare_importances(
        impurity_feature_importance(gbt_model),
        impurity_feature_importance(representative.copy),
        data.schema,
    )
    original_accuracy = accuracy(gbt_model.predict_batch(test.features), test.labels)
    return ScenarioReport(
        name="scenario2",
        original_accuracy=original_accuracy,
        baselines={
            "raw_lr": accuracy(raw_lr.predict_batch(test.features), test.labels),
            "majority_class": _majority_accuracy(test),
        },
        study=study,
        importance=importance,
        config={
            "scenario": "scenario2",
            "generator": (gen_cfg or CreditGenConfig(seed=cfg.seed)).to_json_dict(),
            "run": cfg.to_json_dict(),
        },
        extras={"representative_seed": int(representative.seed)},
    )


def generate_interleaved_arcs(n_points: int, noise: float, seed: int) -> LabeledDataset:
    """Two interleaved half-circle arcs with Gaussian jitter; the classic
    nonlinearly separable 2-D toy."""
    if n_points < 4:
        raise ConfigError("need at least 4 points")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    half = n_points // 2
    t0 = rng.uniform(0.0, np.pi, half)
    t1 = rng.uniform(0.0, np.pi, n_points - half)
    pts = np.concatenate([
        np.column_stack([np.cos(t0), np.sin(t0)]),
        np.column_stack([1.0 - np.cos(t1), 0.5 - np.sin(t1)]),
    ])
    pts += rng.normal(0.0, noise, pts.shape)
    labels = np.concatenate([
        np.zeros(half, dtype=np.int64),
        np.ones(n_points - half, dtype=np.int64),
    ])
    schema = (FeatureSpec("x"), FeatureSpec("y"))
    return LabeledDataset(pts, labels, schema, 2)


def run_toy(cfg: ScenarioConfig) -> ScenarioReport:
    """Neural-network original on the 2-D arcs, tree copy, plus a label
    grid (resolution^2 rows) for decision-boundary plotting."""
    data = generate_interleaved_arcs(cfg.toy_points, cfg.toy_noise, cfg.seed)
    train, test = stratified_split(data, SplitConfig(0.8, cfg.seed))
    # the arcs need a slightly hotter optimizer than the tabular default
    mlp_model = mlp_train(train, MlpConfig(hidden_sizes=(32,),
                                           learning_rate=0.05, epochs=300,
                                           seed=cfg.seed))
    region = fit_region(train, cfg.margin)
    study = run_study(mlp_model, region, cfg.copy_config(cfg.seed), test,
                      threads=cfg.threads)
    representative = study.median_accuracy_run()

    res = cfg.grid_resolution
    xs = np.linspace(region.lower[0], region.upper[0], res)
    ys = np.linspace(region.lower[1], region.upper[1], res)
    gx, gy = np.meshgrid(xs, ys)
    grid = np.column_stack([gx.ravel(), gy.ravel()])
    grid_original = mlp_model.predict_batch(grid)
    grid_copy = representative.copy.predict_batch(grid)

    original_accuracy = accuracy(mlp_model.predict_batch(test.features), test.labels)
    return ScenarioReport(
        name="toy",
        original_accuracy=original_accuracy,
        baselines={"majority_class": _majority_accuracy(test)},
        study=study,
        importance=None,
        config={"scenario": "toy", "run": cfg.to_json_dict()},
        extras={
            "representative_seed": int(representative.seed),
            "boundary_grid": np.column_stack([
                grid, grid_original.astype(np.float64),
                grid_copy.astype(np.float64),
            ]),
        },
    )


# ---------------------------------------------------------------------------
# Plot-ready file emission.
# ---------------------------------------------------------------------------


def write_report_files(report: ScenarioReport, outdir) -> list[str]:
    """report.json + plot CSVs (accuracy histogram; importance bars and
    boundary grid when present). Returns the written paths."""
    import os

    os.makedirs(outdir, exist_ok=True)
    written = []

    path = os.path.join(outdir, "report.json")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
        fh.write("\n")
    written.append(path)

    path = os.path.join(outdir, "accuracy_histogram.csv")
    edges = report.study.histogram_edges
    counts = report.study.histogram_counts
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_left", "bin_right", "count"])
        for i, count in enumerate(counts):
            writer.writerow([repr(float(edges[i])), repr(float(edges[i + 1])),
                             int(count)])
    written.append(path)

    if report.importance is not None:
        orig = os.path.join(outdir, "importance_original.csv")
        copy = os.path.join(outdir, "importance_copy.csv")
        report.importance.write_csv(orig, copy)
        written.extend([orig, copy])

    grid = report.extras.get("boundary_grid")
    if grid is not None:
        path = os.path.join(outdir, "boundary_grid.csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y", "original_label", "copy_label"])
            for row in grid:
                writer.writerow([repr(float(row[0])), repr(float(row[1])),
                                 int(row[2]), int(row[3])])
        written.append(path)
    return written
