import json

import numpy as np
import pytest

from sdnoise.data import (DataError, Dataset, PairSet, SDPoints, SplitSpec,
                          flatten_pairs, generate_gaussian_dataset,
                          load_csv_dataset, load_manifest, split, standardize)


@pytest.fixture
def small_dataset():
    return generate_gaussian_dataset(200, 0.3, (1.0, 1.0), (-1.0, -1.0), 0)


class TestDataset:
    def test_shapes_and_prior(self, small_dataset):
        assert small_dataset.X.shape == (200, 2)
        assert small_dataset.y.shape == (200,)
        assert 0.0 < small_dataset.prior < 1.0
        assert small_dataset.usable

    def test_labels_must_be_pm1(self):
        with pytest.raises(DataError):
            Dataset(np.zeros((3, 2)), np.array([1, 0, -1]))

    def test_immutability(self, small_dataset):
        with pytest.raises(ValueError):
            small_dataset.X[0, 0] = 99.0
        with pytest.raises(ValueError):
            small_dataset.y[0] = -small_dataset.y[0]

    def test_indexing(self, small_dataset):
        pt = small_dataset[3]
        assert pt.x.shape == (2,)
        assert pt.y in (-1, 1)

    def test_misaligned_labels_rejected(self):
        with pytest.raises(DataError):
            Dataset(np.zeros((3, 2)), np.ones(4, dtype=int))


class TestGaussianGenerator:
    def test_determinism(self):
        a = generate_gaussian_dataset(50, 0.5, (1.0,), (-1.0,), 7)
        b = generate_gaussian_dataset(50, 0.5, (1.0,), (-1.0,), 7)
        np.testing.assert_array_equal(a.X, b.X)
        np.testing.assert_array_equal(a.y, b.y)

    def test_prior_concentrates(self):
        ds = generate_gaussian_dataset(20000, 0.2, (2.0, 2.0), (-2.0, -2.0), 1)
        assert abs(ds.prior - 0.2) < 0.02

    def test_class_means(self):
        ds = generate_gaussian_dataset(50000, 0.5, (3.0, 0.0), (-3.0, 0.0), 2)
        pos_mean = ds.X[ds.y == 1].mean(axis=0)
        assert abs(pos_mean[0] - 3.0) < 0.05

    def test_bad_prior_rejected(self):
        for pi in (0.0, 1.0, -0.1):
            with pytest.raises(DataError):
                generate_gaussian_dataset(10, pi, (1.0,), (-1.0,), 0)


class TestStandardize:
    def test_zero_mean_unit_variance(self):
        rng = np.random.default_rng(0)
        X = rng.normal(5.0, 3.0, (500, 4))
        Xs, _, _, kept = standardize(X)
        assert kept.all()
        np.testing.assert_allclose(Xs.mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(Xs.std(axis=0), 1.0, atol=1e-12)

    def test_idempotent(self):
        rng = np.random.default_rng(1)
        X = rng.normal(size=(300, 3))
        once, *_ = standardize(X)
        twice, *_ = standardize(once)
        np.testing.assert_allclose(once, twice, atol=1e-10)

    def test_constant_column_dropped(self):
        X = np.column_stack([np.ones(10), np.arange(10.0)])
        Xs, _, _, kept = standardize(X)
        assert Xs.shape == (10, 1)
        assert list(kept) == [False, True]


class TestCSVLoading:
    def test_round_trip(self, tmp_path):
        p = tmp_path / "toy.csv"
        p.write_text("a,b,label\n1.0,2.0,yes\n3.0,1.0,no\n2.0,5.0,yes\n")
        ds = load_csv_dataset(p, "label", "yes")
        assert ds.n == 3
        assert list(ds.y) == [1, -1, 1]

    def test_one_hot_expansion(self, tmp_path):
        p = tmp_path / "cat.csv"
        p.write_text("a,color,label\n1,red,yes\n2,blue,no\n3,green,yes\n")
        ds = load_csv_dataset(p, "label", "yes", one_hot_columns=("color",))
        assert ds.d == 4  # a + three colors

    def test_missing_positive_token(self, tmp_path):
        p = tmp_path / "toy.csv"
        p.write_text("a,label\n1.0,no\n2.0,no\n")
        with pytest.raises(DataError):
            load_csv_dataset(p, "label", "yes")

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_csv_dataset(tmp_path / "nope.csv", "label", "yes")

    def test_constant_column_warns(self, tmp_path):
        p = tmp_path / "const.csv"
        p.write_text("a,b,label\n1,7,yes\n2,7,no\n3,7,yes\n")
        with pytest.warns(UserWarning):
            ds = load_csv_dataset(p, "label", "yes")
        assert ds.d == 1
        assert ds.dropped_columns == ("b",)

    def test_manifest(self, tmp_path):
        csv = tmp_path / "toy.csv"
        csv.write_text("a,label\n1.0,yes\n2.0,no\n-1.0,yes\n")
        man = tmp_path / "toy.json"
        man.write_text(json.dumps({"path": "toy.csv", "label_column": "label",
                                   "positive_value": "yes"}))
        ds = load_manifest(man)
        assert ds.n == 3


class TestSplit:
    def test_sizes(self, small_dataset):
        tr, te = split(small_dataset, SplitSpec(0.75, 0))
        assert tr.n == 150 and te.n == 50

    def test_disjoint_exhaustive(self, small_dataset):
        tr, te = split(small_dataset, SplitSpec(0.75, 3))
        joined = np.vstack([tr.X, te.X])
        assert joined.shape == small_dataset.X.shape
        orig = {tuple(r) for r in small_dataset.X}
        assert {tuple(r) for r in joined} == orig

    def test_determinism(self, small_dataset):
        a = split(small_dataset, SplitSpec(0.6, 5))
        b = split(small_dataset, SplitSpec(0.6, 5))
        np.testing.assert_array_equal(a[0].X, b[0].X)

    def test_bad_fraction(self):
        with pytest.raises(DataError):
            SplitSpec(1.0, 0)


class TestPairsAndFlatten:
    def test_pairset_validation(self):
        with pytest.raises(DataError):
            PairSet(np.zeros((2, 3)), np.zeros((2, 2)), np.array([1, -1]))
        with pytest.raises(DataError):
            PairSet(np.zeros((2, 2)), np.zeros((2, 2)), np.array([1, 0]))

    def test_flatten_interleaves(self):
        X = np.array([[1.0, 0.0], [2.0, 0.0]])
        Xp = np.array([[10.0, 0.0], [20.0, 0.0]])
        pts = flatten_pairs(PairSet(X, Xp, np.array([1, -1])))
        assert pts.n == 4
        np.testing.assert_array_equal(pts.X[:, 0], [1.0, 10.0, 2.0, 20.0])
        np.testing.assert_array_equal(pts.q, [1, 1, -1, -1])

    def test_sdpoints_validation(self):
        with pytest.raises(DataError):
            SDPoints(np.zeros((2, 2)), np.array([1, 2]))
