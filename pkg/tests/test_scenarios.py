import json

import numpy as np
import pytest

from copycat.errors import ConfigError
from copycat.scenarios import (
    CREDIT_SCHEMA,
    CreditGenConfig,
    ScenarioConfig,
    engineer_credit_features,
    generate_credit_like,
    generate_interleaved_arcs,
    run_scenario1,
    run_scenario2,
    run_toy,
    write_report_files,
)

SMALL = ScenarioConfig(seed=0, runs=2, n_synthetic=4000, grid_resolution=20,
                       toy_points=300)


@pytest.fixture(scope="module")
def scenario1_report():
    data = generate_credit_like(CreditGenConfig(seed=0))
    return run_scenario1(data, SMALL)


@pytest.fixture(scope="module")
def scenario2_report():
    data = generate_credit_like(CreditGenConfig(seed=0))
    return run_scenario2(data, SMALL)


@pytest.fixture(scope="module")
def toy_report():
    return run_toy(SMALL)


class TestCreditGenerator:
    def test_default_shape_and_prevalence(self):
        ds = generate_credit_like(CreditGenConfig())
        assert ds.n_rows == 1328 and ds.n_features == 19
        assert 0.21 <= ds.labels.mean() <= 0.25
        names = [s.name for s in ds.schema]
        assert "age" in names and "economy_level" in names

    def test_same_seed_identical(self):
        a = generate_credit_like(CreditGenConfig(seed=5))
        b = generate_credit_like(CreditGenConfig(seed=5))
        np.testing.assert_array_equal(a.features, b.features)
        np.testing.assert_array_equal(a.labels, b.labels)

    def test_different_seed_differs(self):
        a = generate_credit_like(CreditGenConfig(seed=5))
        b = generate_credit_like(CreditGenConfig(seed=6))
        assert not np.array_equal(a.features, b.features)

    def test_ten_rows_keeps_both_classes(self):
        ds = generate_credit_like(CreditGenConfig(n_rows=10))
        assert set(np.unique(ds.labels)) == {0, 1}

    def test_too_small_for_two_classes_rejected(self):
        with pytest.raises(ConfigError, match="fewer than 2"):
            generate_credit_like(CreditGenConfig(n_rows=4))

    def test_wrong_width_rejected(self):
        with pytest.raises(ConfigError, match="19"):
            CreditGenConfig(d_raw=7)

    @pytest.mark.parametrize("seed", range(50))
    def test_prevalence_calibrated_for_many_seeds(self, seed):
        ds = generate_credit_like(CreditGenConfig(seed=seed))
        assert abs(ds.labels.mean() - 0.23) <= 0.02

    def test_nominal_columns_are_category_indices(self):
        ds = generate_credit_like(CreditGenConfig())
        for j, spec in enumerate(CREDIT_SCHEMA):
            if spec.kind == "nominal":
                col = ds.features[:, j]
                assert np.array_equal(col, np.round(col))
                assert col.min() >= 0 and col.max() < len(spec.categories)


class TestScenario1:
    def test_copy_consumes_raw_dimension(self, scenario1_report):
        report = scenario1_report
        assert report.extras["oracle_input_dim"] == 19
        assert report.extras["engineered_dim"] == 6
        # the trained copies themselves consume the raw attribute space
        assert all(r.copy.input_dim() == 19 for r in report.study.results)

    def test_report_has_accuracy_and_study(self, scenario1_report):
        report = scenario1_report
        assert 0.0 <= report.original_accuracy <= 1.0
        assert len(report.study.results) == 2
        doc = report.to_json_dict()
        assert doc["scenario"] == "scenario1"
        assert doc["config"]["engineered_variables"][0] == "debt_to_income"
        assert "note" in doc

    def test_deterministic(self):
        data = generate_credit_like(CreditGenConfig(seed=0))
        cfg = ScenarioConfig(seed=0, runs=1, n_synthetic=2000)
        a = run_scenario1(data, cfg).to_json()
        b = run_scenario1(data, cfg).to_json()
        assert a == b

    def test_rejects_wrong_schema(self):
        arcs = generate_interleaved_arcs(100, 0.1, 0)
        with pytest.raises(ConfigError, match="schema"):
            run_scenario1(arcs, SMALL)


class TestScenario2:
    def test_importance_report_emitted(self, scenario2_report):
        report = scenario2_report
        imp = report.importance
        assert imp is not None
        assert len(imp.feature_names) == 19
        assert (imp.original >= 0).all() and (imp.copy >= 0).all()
        assert abs(imp.original.sum() - 1.0) <= 1e-12
        assert abs(imp.copy.sum() - 1.0) <= 1e-12
        assert 0.0 <= imp.concentration_original < 1.0
        assert 0.0 <= imp.concentration_copy < 1.0

    def test_baselines_present(self, scenario2_report):
        report = scenario2_report
        assert "raw_lr" in report.baselines
        assert "majority_class" in report.baselines

    def test_report_files(self, scenario2_report, tmp_path):
        report = scenario2_report
        written = write_report_files(report, tmp_path / "out")
        names = {p.split("/")[-1] for p in written}
        assert names == {"report.json", "accuracy_histogram.csv",
                         "importance_original.csv", "importance_copy.csv"}
        doc = json.loads((tmp_path / "out" / "report.json").read_text())
        assert doc["scenario"] == "scenario2"
        assert len(doc["importance"]["features"]) == 19
        hist = (tmp_path / "out" / "accuracy_histogram.csv").read_text().splitlines()
        assert hist[0] == "bin_left,bin_right,count"
        assert len(hist) == 1 + len(report.study.histogram_counts)


class TestEngineeredFeatures:
    def test_engineered_matrix_matches_manual_formulas(self):
        data = generate_credit_like(CreditGenConfig(seed=1, n_rows=50))
        raw = data.features
        eng = engineer_credit_features(raw)
        assert eng.shape == (50, 6)
        np.testing.assert_allclose(eng[:, 0], raw[:, 12] / (raw[:, 2] + 1.0))
        np.testing.assert_allclose(eng[:, 4], raw[:, 0])


class TestToy:
    def test_grid_has_resolution_squared_rows(self, toy_report):
        report = toy_report
        grid = report.extras["boundary_grid"]
        assert grid.shape == (SMALL.grid_resolution ** 2, 4)
        assert set(np.unique(grid[:, 2])).issubset({0.0, 1.0})

    def test_fixed_seed_reproduces_grid(self):
        cfg = ScenarioConfig(seed=3, runs=1, n_synthetic=2000,
                             grid_resolution=10, toy_points=200)
        a = run_toy(cfg).extras["boundary_grid"]
        b = run_toy(cfg).extras["boundary_grid"]
        np.testing.assert_array_equal(a, b)

    def test_boundary_grid_file(self, toy_report, tmp_path):
        report = toy_report
        written = write_report_files(report, tmp_path / "toy")
        names = {p.split("/")[-1] for p in written}
        assert "boundary_grid.csv" in names
        lines = (tmp_path / "toy" / "boundary_grid.csv").read_text().splitlines()
        assert lines[0] == "x,y,original_label,copy_label"
        assert len(lines) == 1 + SMALL.grid_resolution ** 2


class TestScenarioConfig:
    def test_paper_scale_switches_settings(self):
        cfg = ScenarioConfig(paper_scale=True)
        assert cfg.effective_n() == 1_000_000
        assert cfg.effective_runs() == 100
        echo = cfg.to_json_dict()
        assert echo["n_synthetic"] == 1_000_000 and echo["runs"] == 100

    def test_desk_scale_defaults(self):
        cfg = ScenarioConfig()
        assert cfg.effective_n() == 100_000
        assert cfg.effective_runs() == 30
        assert "threads" not in cfg.to_json_dict()
