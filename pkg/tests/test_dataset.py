import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svmcoreset import (LabeledDataset, dataset_stats, from_points, load_csv,
                        load_libsvm, load_preprocessed_csv, preprocess,
                        save_csv)
from svmcoreset.dataset import NORM_SLACK


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoadCsv:
    def test_basic_parse(self, tmp_path):
        path = write(tmp_path, "d.csv", "1,0,+1\n-1,0,-1\n")
        ds = load_csv(path, label_column=2, has_header=False)
        assert ds.n == 2 and ds.d == 2
        assert list(ds.y) == [1.0, -1.0]
        np.testing.assert_array_equal(ds.X, [[1.0, 0.0], [-1.0, 0.0]])
        assert not ds.preprocessed
        np.testing.assert_array_equal(ds.weights, [1.0, 1.0])

    def test_zero_one_labels_mapped(self, tmp_path):
        path = write(tmp_path, "d.csv", "label,f1\n0,2.5\n1,-3.5\n")
        ds = load_csv(path)
        assert list(ds.y) == [-1.0, 1.0]

    def test_row_order_preserved(self, tmp_path):
        rows = "\n".join(f"1,{i}" for i in range(20))
        ds = load_csv(write(tmp_path, "d.csv", rows), has_header=False)
        np.testing.assert_array_equal(ds.X[:, 0], np.arange(20))

    def test_negative_label_column(self, tmp_path):
        path = write(tmp_path, "d.csv", "0.5,1.5,1\n0.25,2.5,0\n")
        ds = load_csv(path, label_column=-1, has_header=False)
        assert list(ds.y) == [1.0, -1.0]
        np.testing.assert_array_equal(ds.X[0], [0.5, 1.5])

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_csv(tmp_path / "nope.csv")

    def test_ragged_rows(self, tmp_path):
        with pytest.raises(ValueError, match="columns"):
            load_csv(write(tmp_path, "d.csv", "1,2,3\n1,2\n"), has_header=False)

    def test_bad_numeric(self, tmp_path):
        with pytest.raises(ValueError, match="feature"):
            load_csv(write(tmp_path, "d.csv", "1,abc\n"), has_header=False)

    def test_label_out_of_domain(self, tmp_path):
        with pytest.raises(ValueError, match="label"):
            load_csv(write(tmp_path, "d.csv", "2,1.0\n"), has_header=False)

    def test_empty_file(self, tmp_path):
        with pytest.raises(ValueError, match="no data rows"):
            load_csv(write(tmp_path, "d.csv", "label,f1\n"))


class TestLoadLibsvm:
    def test_sparse_to_dense(self, tmp_path):
        ds = load_libsvm(write(tmp_path, "d.txt", "+1 1:0.5 3:0.5\n"))
        np.testing.assert_array_equal(ds.X, [[0.5, 0.0, 0.5]])
        assert ds.y[0] == 1.0

    def test_empty_feature_line_and_dim_inference(self, tmp_path):
        ds = load_libsvm(write(tmp_path, "d.txt", "-1\n+1 4:2.0\n"))
        assert ds.d == 4
        np.testing.assert_array_equal(ds.X[0], np.zeros(4))
        assert ds.y[0] == -1.0

    def test_two_lines_share_dimension(self, tmp_path):
        ds = load_libsvm(write(tmp_path, "d.txt", "+1 2:1.0\n-1 4:3.0\n"))
        assert ds.d == 4 and ds.n == 2

    def test_malformed_token(self, tmp_path):
        with pytest.raises(ValueError, match="malformed"):
            load_libsvm(write(tmp_path, "d.txt", "+1 1:0.5 oops\n"))

    def test_non_ascending_indices(self, tmp_path):
        with pytest.raises(ValueError, match="ascending"):
            load_libsvm(write(tmp_path, "d.txt", "+1 3:1.0 2:1.0\n"))

    def test_empty_file(self, tmp_path):
        with pytest.raises(ValueError, match="empty"):
            load_libsvm(write(tmp_path, "d.txt", "\n"))


def two_point_raw():
    return LabeledDataset(np.array([[2.0, 0.0], [0.0, 0.0]]),
                          np.array([1.0, -1.0]), np.ones(2))


class TestPreprocess:
    def test_center_and_scale_pair(self):
        out = preprocess(two_point_raw())
        np.testing.assert_allclose(out.X, [[1.0, 0.0], [-1.0, 0.0]])
        assert out.preprocessed
        assert out.scale == pytest.approx(1.0)

    def test_single_point_skips_scaling(self):
        ds = LabeledDataset(np.array([[5.0, 5.0]]), np.array([1.0]), np.ones(1))
        out = preprocess(ds)
        np.testing.assert_array_equal(out.X, [[0.0, 0.0]])
        assert out.preprocessed

    def test_bias_embedding(self):
        # Expected values straight from the embedding rule applied to the
        # centered/scaled pair (+-1, 0).
        root_half = 1.0 / math.sqrt(2.0)
        expected = np.array([[root_half, 0.0, root_half],
                             [-root_half, 0.0, root_half]])
        ds = LabeledDataset(np.array([[1.0, 0.0], [-1.0, 0.0]]),
                            np.array([1.0, -1.0]), np.ones(2))
        out = preprocess(ds, add_bias=True)
        np.testing.assert_allclose(out.X, expected, rtol=1e-15)
        np.testing.assert_allclose(np.linalg.norm(out.X, axis=1), [1.0, 1.0])
        assert out.d == 3 and out.bias

    def test_already_preprocessed_rejected(self):
        out = preprocess(two_point_raw())
        with pytest.raises(ValueError, match="already"):
            preprocess(out)

    def test_preserves_labels_weights_order(self):
        ds = LabeledDataset(np.arange(12.0).reshape(6, 2),
                            np.array([1, -1, 1, 1, -1, -1.0]),
                            np.array([1.0, 2.0, 1.0, 0.5, 1.0, 3.0]),
                            source_n=6)
        out = preprocess(ds)
        np.testing.assert_array_equal(out.y, ds.y)
        np.testing.assert_array_equal(out.weights, ds.weights)
        # order: the largest raw point stays the largest after the affine map
        assert np.argmax(np.linalg.norm(out.X, axis=1)) in (0, 5)

    def test_idempotent_in_effect(self, small_pp):
        again = preprocess(LabeledDataset(small_pp.X, small_pp.y, small_pp.weights))
        assert np.abs(again.X - small_pp.X).max() <= 1e-9

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 40), st.integers(1, 8), st.integers(0, 10_000))
    def test_unit_ball_and_centering(self, n, d, seed):
        rng = np.random.default_rng(seed)
        ds = LabeledDataset(rng.normal(scale=5.0, size=(n, d)),
                            rng.choice([-1.0, 1.0], size=n), np.ones(n))
        out = preprocess(ds)
        norms = np.linalg.norm(out.X, axis=1)
        assert norms.max() <= 1.0 + NORM_SLACK
        assert np.linalg.norm(out.X.mean(axis=0)) <= 1e-6


class TestRoundTrip:
    def test_csv_round_trip_exact(self, tmp_path, small_pp):
        path = save_csv(small_pp, tmp_path / "pp.csv")
        back = load_csv(path, label_column=0, has_header=True)
        np.testing.assert_allclose(back.X, small_pp.X, rtol=1e-12)
        np.testing.assert_array_equal(back.y, small_pp.y)

    def test_sidecar_restores_preprocessing(self, tmp_path, small_pp):
        path = save_csv(small_pp, tmp_path / "pp.csv")
        assert (tmp_path / "pp.meta.json").exists()
        back = load_preprocessed_csv(path)
        assert back.preprocessed
        np.testing.assert_allclose(back.center, small_pp.center)
        assert back.scale == pytest.approx(small_pp.scale)

    def test_raw_dataset_gets_no_sidecar(self, tmp_path):
        path = save_csv(two_point_raw(), tmp_path / "raw.csv")
        assert not (tmp_path / "raw.meta.json").exists()
        assert not load_preprocessed_csv(path).preprocessed


class TestStats:
    def test_two_point_summary(self):
        out = preprocess(two_point_raw())
        stats = dataset_stats(out)
        assert stats.n == 2 and stats.d == 2
        assert stats.class_counts == {1: 1, -1: 1}
        assert stats.max_norm == pytest.approx(1.0)

    def test_empty_dataset(self):
        ds = LabeledDataset(np.zeros((0, 3)), np.zeros(0), np.zeros(0))
        stats = dataset_stats(ds)
        assert stats.n == 0 and stats.class_counts == {}


class TestValidation:
    def test_bad_label(self):
        with pytest.raises(ValueError, match="labels"):
            LabeledDataset(np.ones((1, 2)), np.array([2.0]), np.ones(1))

    def test_negative_weight(self):
        with pytest.raises(ValueError, match="weights"):
            LabeledDataset(np.ones((1, 2)), np.array([1.0]), np.array([-0.5]))

    def test_non_finite_features(self):
        with pytest.raises(ValueError, match="finite"):
            LabeledDataset(np.array([[np.inf, 0.0]]), np.array([1.0]), np.ones(1))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="agree"):
            LabeledDataset(np.ones((2, 2)), np.array([1.0]), np.ones(2))

    def test_preprocessed_flag_enforces_unit_ball(self):
        with pytest.raises(ValueError, match="unit ball"):
            LabeledDataset(np.array([[3.0, 0.0]]), np.array([1.0]), np.ones(1),
                           preprocessed=True)

    def test_arrays_immutable(self, small_pp):
        with pytest.raises(ValueError):
            small_pp.X[0, 0] = 99.0

    def test_population_requires_source_for_weighted(self):
        ds = LabeledDataset(np.ones((2, 1)), np.array([1.0, -1.0]),
                            np.array([2.0, 3.0]))
        with pytest.raises(ValueError, match="population"):
            ds.population()

    def test_from_points_round_trip(self, small_pp):
        rebuilt = from_points(list(small_pp.points()), preprocessed=True)
        np.testing.assert_array_equal(rebuilt.X, small_pp.X)
        np.testing.assert_array_equal(rebuilt.y, small_pp.y)
