import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copycat.errors import DataError
from copycat.metrics import (
    accuracy,
    agreement,
    compare_importances,
    concentration_index,
    spearman_rank_correlation,
)
from copycat.models import LogisticRegressionModel, pipeline_classifier
from helpers import constant_oracle


class TestAccuracy:
    def test_identical(self):
        assert accuracy([0, 1, 1], [0, 1, 1]) == 1.0

    def test_half(self):
        assert accuracy([0, 1, 0, 1], [0, 1, 1, 0]) == 0.5

    def test_matches_counting_loop_oracle(self):
        rng = np.random.default_rng(6)
        a = rng.integers(0, 2, 10_000)
        b = rng.integers(0, 2, 10_000)
        hits = 0
        for x, y in zip(a, b):  # independent second implementation
            if x == y:
                hits += 1
        assert accuracy(a, b) == hits / 10_000

    def test_length_mismatch_and_empty(self):
        with pytest.raises(DataError):
            accuracy([0, 1], [0])
        with pytest.raises(DataError):
            accuracy([], [])

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.integers(0, 3), min_size=1, max_size=50),
           st.integers(0, 1000))
    def test_joint_permutation_invariance(self, labels, seed):
        rng = np.random.default_rng(seed)
        truth = np.array(labels)
        preds = rng.integers(0, 4, truth.size)
        perm = rng.permutation(truth.size)
        assert accuracy(preds, truth) == accuracy(preds[perm], truth[perm])


class TestAgreement:
    def test_model_vs_itself(self):
        rng = np.random.default_rng(0)
        model = LogisticRegressionModel(rng.normal(size=3), 0.1)
        pts = rng.normal(size=(50, 3))
        assert agreement(model, model, pts) == 1.0

    def test_constant_models_disagree_everywhere(self):
        pts = np.zeros((10, 2))
        assert agreement(constant_oracle(0), constant_oracle(1), pts) == 0.0

    def test_pipeline_identity_composition_agrees(self):
        rng = np.random.default_rng(1)
        model = LogisticRegressionModel(rng.normal(size=4), -0.2)
        pipe = pipeline_classifier(lambda X: X, model, input_dim=4)
        pts = rng.normal(size=(80, 4))
        assert agreement(model, pipe, pts) == 1.0

    def test_symmetry(self):
        rng = np.random.default_rng(2)
        a = LogisticRegressionModel(rng.normal(size=2), 0.0)
        b = LogisticRegressionModel(rng.normal(size=2), 0.5)
        pts = rng.normal(size=(200, 2))
        assert agreement(a, b, pts) == agreement(b, a, pts)


class TestSpearman:
    def test_identical_vectors(self):
        assert spearman_rank_correlation([0.5, 0.3, 0.2], [0.5, 0.3, 0.2]) == 1.0

    def test_reversed_vectors(self):
        assert spearman_rank_correlation([4.0, 3.0, 2.0, 1.0],
                                         [1.0, 2.0, 3.0, 4.0]) == -1.0

    def test_hand_computed_tie_case(self):
        # ranks (asc, average ties): a -> [3.5, 3.5, 2, 1], b -> [4, 2.5, 2.5, 1]
        # centered dot = 3.75, norms = sqrt(4.5) * sqrt(4.5) -> rho = 5/6
        a = [0.40, 0.40, 0.15, 0.05]
        b = [0.50, 0.20, 0.20, 0.10]
        assert spearman_rank_correlation(a, b) == pytest.approx(5.0 / 6.0, abs=1e-12)

    def test_constant_vector_returns_zero(self):
        assert spearman_rank_correlation([1.0, 1.0, 1.0], [1.0, 2.0, 3.0]) == 0.0


class TestConcentrationIndex:
    def test_uniform_is_zero(self):
        assert concentration_index([0.25] * 4) == pytest.approx(0.0, abs=1e-15)

    def test_one_hot_is_three_quarters_for_d4(self):
        assert concentration_index([0.0, 0.0, 1.0, 0.0]) == pytest.approx(0.75, abs=1e-15)

    def test_two_equal_features(self):
        assert concentration_index([0.5, 0.5, 0.0, 0.0]) == pytest.approx(0.5, abs=1e-15)

    def test_rejects_bad_input(self):
        with pytest.raises(DataError):
            concentration_index([0.5, -0.1])
        with pytest.raises(DataError):
            concentration_index([0.0, 0.0])

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.floats(0.001, 10.0), min_size=2, max_size=12),
           st.integers(0, 999), st.floats(0.01, 100.0))
    def test_permutation_and_scale_invariance(self, values, seed, scale):
        v = np.array(values)
        perm = np.random.default_rng(seed).permutation(v.size)
        base = concentration_index(v)
        assert concentration_index(v[perm]) == pytest.approx(base, abs=1e-12)
        assert concentration_index(v * scale) == pytest.approx(base, rel=1e-9)


class TestCompareImportances:
    def test_identical_vectors(self):
        report = compare_importances([0.5, 0.3, 0.15, 0.05],
                                     [0.5, 0.3, 0.15, 0.05],
                                     ["a", "b", "c", "d"])
        assert report.rank_correlation == 1.0
        assert report.top_overlap == {3: 3, 5: 4}
        assert report.order == (0, 1, 2, 3)

    def test_reversed_vectors(self):
        report = compare_importances([0.4, 0.3, 0.2, 0.1],
                                     [0.1, 0.2, 0.3, 0.4],
                                     ["a", "b", "c", "d"])
        assert report.rank_correlation == -1.0

    def test_permuted_inputs_yield_same_report_up_to_row_order(self):
        orig = np.array([0.45, 0.25, 0.2, 0.1])
        copy = np.array([0.5, 0.3, 0.1, 0.1])
        names = ["a", "b", "c", "d"]
        perm = [2, 0, 3, 1]
        base = compare_importances(orig, copy, names)
        shuffled = compare_importances(orig[perm], copy[perm],
                                       [names[i] for i in perm])
        base_rows = [(base.feature_names[i], base.original[i], base.copy[i])
                     for i in base.order]
        shuf_rows = [(shuffled.feature_names[i], shuffled.original[i], shuffled.copy[i])
                     for i in shuffled.order]
        assert base_rows == shuf_rows
        assert shuffled.rank_correlation == pytest.approx(base.rank_correlation, abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(DataError):
            compare_importances([0.5, 0.5], [1.0], ["a", "b"])

    def test_csv_emission(self, tmp_path):
        report = compare_importances([0.6, 0.4], [0.3, 0.7], ["f1", "f2"])
        orig, copy = tmp_path / "o.csv", tmp_path / "c.csv"
        report.write_csv(orig, copy)
        lines = copy.read_text().strip().splitlines()
        assert lines[0] == "feature,importance"
        assert lines[1].startswith("f2,")  # copy-descending order
