import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copycat.data import (
    FeatureSpec,
    LabeledDataset,
    SplitConfig,
    Standardizer,
    apply_standardizer,
    decode_nominals,
    encode_nominals,
    fit_standardizer,
    load_csv,
    stratified_split,
)
from copycat.errors import DataError
from helpers import dataset


def write_csv(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadCsv:
    def test_numeric_columns_and_first_appearance_labels(self, tmp_path):
        path = write_csv(tmp_path, "a,b,cls\n1,2,yes\n3,4,no\n5,6,yes\n7,8,yes\n")
        ds = load_csv(path, "cls")
        assert ds.n_rows == 4 and ds.n_features == 2 and ds.class_count == 2
        assert ds.labels.tolist() == [0, 1, 0, 0]
        assert [s.kind for s in ds.schema] == ["numeric", "numeric"]
        np.testing.assert_array_equal(ds.features[:, 0], [1, 3, 5, 7])

    def test_nominal_column_first_appearance_coding(self, tmp_path):
        path = write_csv(tmp_path, "color,cls\nred,a\nblue,b\nred,a\n")
        ds = load_csv(path, "cls")
        assert ds.schema[0].kind == "nominal"
        assert ds.schema[0].categories == ("red", "blue")
        assert ds.features[:, 0].tolist() == [0.0, 1.0, 0.0]

    def test_ragged_row_names_row_index(self, tmp_path):
        path = write_csv(tmp_path, "a,b,c,cls\n1,2,3,x\n1,2,y\n3,4,5,x\n")
        with pytest.raises(DataError, match="row 1"):
            load_csv(path, "cls")

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError, match="cannot open"):
            load_csv(tmp_path / "nope.csv", "cls")

    def test_missing_label_column(self, tmp_path):
        path = write_csv(tmp_path, "a,b\n1,2\n3,4\n")
        with pytest.raises(DataError, match="label column"):
            load_csv(path, "cls")

    def test_unparseable_numeric_with_hint_names_cell(self, tmp_path):
        path = write_csv(tmp_path, "a,cls\n1,x\noops,y\n")
        hint = [FeatureSpec("a")]
        with pytest.raises(DataError, match="row 1.*'a'"):
            load_csv(path, "cls", schema_hint=hint)

    def test_non_finite_cell_rejected(self, tmp_path):
        path = write_csv(tmp_path, "a,cls\n1,x\ninf,y\n")
        hint = [FeatureSpec("a")]
        with pytest.raises(DataError, match="non-finite"):
            load_csv(path, "cls", schema_hint=hint)

    def test_duplicate_header_names_rejected(self, tmp_path):
        path = write_csv(tmp_path, "a,a,cls\n1,2,x\n3,4,y\n")
        with pytest.raises(DataError, match="unique"):
            load_csv(path, "cls")

    def test_nominal_schema_hint_enforces_categories(self, tmp_path):
        path = write_csv(tmp_path, "color,cls\nred,x\nblue,y\n")
        hint = [FeatureSpec("color", "nominal", ("blue", "red"))]
        ds = load_csv(path, "cls", schema_hint=hint)
        assert ds.features[:, 0].tolist() == [1.0, 0.0]  # hint order wins
        bad_hint = [FeatureSpec("color", "nominal", ("blue",))]
        with pytest.raises(DataError, match="red"):
            load_csv(path, "cls", schema_hint=bad_hint)

    def test_deterministic_for_identical_bytes(self, tmp_path):
        text = "a,color,cls\n1,red,u\n2,blue,v\n3,red,u\n"
        d1 = load_csv(write_csv(tmp_path, text, "one.csv"), "cls")
        d2 = load_csv(write_csv(tmp_path, text, "two.csv"), "cls")
        np.testing.assert_array_equal(d1.features, d2.features)
        np.testing.assert_array_equal(d1.labels, d2.labels)
        assert d1.schema == d2.schema


class TestEncodeNominals:
    def test_basic(self):
        spec = FeatureSpec("c", "nominal", ("red", "blue"))
        assert encode_nominals(["red", "blue", "red"], spec).tolist() == [0.0, 1.0, 0.0]

    def test_single_value(self):
        spec = FeatureSpec("c", "nominal", ("red", "blue"))
        assert encode_nominals(["blue"], spec).tolist() == [1.0]

    def test_unseen_category_names_value(self):
        spec = FeatureSpec("c", "nominal", ("red", "blue"))
        with pytest.raises(DataError, match="green"):
            encode_nominals(["green"], spec)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.sampled_from(["a", "b", "c", "d"]), min_size=1, max_size=30))
    def test_encode_decode_round_trip(self, values):
        spec = FeatureSpec("c", "nominal", ("a", "b", "c", "d"))
        assert decode_nominals(encode_nominals(values, spec), spec) == values


class TestStandardizer:
    def test_two_point_column(self):
        ds = dataset([[1.0], [3.0]], [0, 1])
        s = fit_standardizer(ds)
        assert s.means[0] == 2.0 and s.stds[0] == 1.0  # population std

    def test_constant_column_substituted(self):
        ds = dataset([[5.0, 1.0], [5.0, 2.0], [5.0, 3.0]], [0, 1, 0])
        with pytest.warns(UserWarning, match="constant"):
            s = fit_standardizer(ds)
        assert s.means[0] == 5.0 and s.stds[0] == 1.0

    def test_transformed_moments_are_centered_unit(self):
        rng = np.random.default_rng(3)
        ds = dataset(rng.normal(5, 3, size=(500, 4)), rng.integers(0, 2, 500))
        out = apply_standardizer(ds, fit_standardizer(ds))
        # independent recomputation of the moments on the transformed matrix
        assert np.abs(out.features.mean(axis=0)).max() < 1e-9
        assert np.abs(out.features.var(axis=0) - 1.0).max() < 1e-9

    def test_needs_two_rows(self):
        with pytest.raises(DataError, match="at least 2"):
            fit_standardizer(dataset([[1.0]], [0]))

    def test_apply_cell_formula_and_identity(self):
        ds = dataset([[3.0]], [0])
        s = Standardizer(np.array([2.0]), np.array([1.0]))
        assert apply_standardizer(ds, s).features[0, 0] == 1.0
        ident = Standardizer(np.array([0.0]), np.array([1.0]))
        np.testing.assert_array_equal(
            apply_standardizer(ds, ident).features, ds.features
        )

    def test_round_trip_inverse(self):
        rng = np.random.default_rng(5)
        ds = dataset(rng.normal(2, 7, size=(60, 3)), rng.integers(0, 2, 60))
        s = fit_standardizer(ds)
        back = s.inverse_transform(s.transform(ds.features))
        np.testing.assert_allclose(back, ds.features, atol=1e-12)

    def test_dimension_mismatch(self):
        ds = dataset([[1.0, 2.0]], [0])
        with pytest.raises(DataError, match="columns"):
            apply_standardizer(ds, Standardizer(np.zeros(3), np.ones(3)))

    def test_json_round_trip(self):
        s = Standardizer(np.array([1.5, -2.0]), np.array([0.25, 3.0]))
        s2 = Standardizer.from_json(s.to_json())
        np.testing.assert_array_equal(s.means, s2.means)
        np.testing.assert_array_equal(s.stds, s2.stds)
        assert '"means"' in s.to_json() and '"stds"' in s.to_json()


class TestStratifiedSplit:
    def test_mortgage_sized_split_counts(self):
        # 1328 rows with 303 defaults: the 0.8/0.2 split leaves 266 test
        # rows of which round(0.2 * 303) = 61 are defaults.
        labels = np.zeros(1328, dtype=np.int64)
        labels[:303] = 1
        rng = np.random.default_rng(0)
        rng.shuffle(labels)
        ds = dataset(rng.normal(size=(1328, 3)), labels)
        train, test = stratified_split(ds, SplitConfig(0.8, 7))
        assert test.n_rows == 266
        assert int(test.labels.sum()) == 61
        assert int(train.labels.sum()) == 242
        assert abs(test.labels.mean() - 0.23) < 0.01

    def test_small_balanced_split(self):
        ds = dataset(np.arange(20, dtype=float).reshape(10, 2),
                     [0, 0, 0, 0, 0, 1, 1, 1, 1, 1])
        train, test = stratified_split(ds, SplitConfig(0.8, 1))
        assert train.n_rows == 8 and test.n_rows == 2
        assert int(train.labels.sum()) == 4 and int(test.labels.sum()) == 1

    def test_same_seed_identical(self):
        rng = np.random.default_rng(11)
        ds = dataset(rng.normal(size=(40, 2)), rng.integers(0, 2, 40))
        a_train, a_test = stratified_split(ds, SplitConfig(0.75, 9))
        b_train, b_test = stratified_split(ds, SplitConfig(0.75, 9))
        np.testing.assert_array_equal(a_train.features, b_train.features)
        np.testing.assert_array_equal(a_test.features, b_test.features)

    def test_class_with_single_row_rejected(self):
        ds = dataset([[0.0], [1.0], [2.0]], [0, 0, 1])
        with pytest.raises(DataError, match="class 1"):
            stratified_split(ds, SplitConfig(0.8, 0))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(4, 60), st.integers(4, 60),
           st.floats(0.2, 0.8), st.integers(0, 10_000))
    def test_partition_and_proportion_bounds(self, n0, n1, fraction, seed):
        labels = np.concatenate([np.zeros(n0, dtype=np.int64),
                                 np.ones(n1, dtype=np.int64)])
        ds = dataset(np.arange(len(labels), dtype=float)[:, None], labels)
        train, test = stratified_split(ds, SplitConfig(fraction, seed))
        assert train.n_rows + test.n_rows == ds.n_rows
        for c, total in ((0, n0), (1, n1)):
            got = int((train.labels == c).sum()) + int((test.labels == c).sum())
            assert got == total
        global_p = n1 / (n0 + n1)
        for side in (train, test):
            assert abs(side.labels.mean() - global_p) <= 1.0 / side.n_rows + 1e-12


class TestLabeledDataset:
    def test_rejects_nan(self):
        with pytest.raises(DataError, match="NaN"):
            dataset([[np.nan]], [0])

    def test_rejects_label_out_of_range(self):
        with pytest.raises(DataError, match="labels"):
            LabeledDataset(np.zeros((2, 1)), np.array([0, 5]),
                           (FeatureSpec("a"),), 2)

    def test_duplicate_feature_names_rejected(self):
        with pytest.raises(DataError, match="unique"):
            LabeledDataset(np.zeros((1, 2)), np.array([0]),
                           (FeatureSpec("a"), FeatureSpec("a")), 2)

    def test_arrays_immutable(self):
        ds = dataset([[1.0], [2.0]], [0, 1])
        with pytest.raises(ValueError):
            ds.features[0, 0] = 9.0
