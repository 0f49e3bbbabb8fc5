import numpy as np
import pytest

from sdnoise.baselines import (Clustering, ClusteringError, Constraints,
                               clusters_to_classes, constrained_kmeans,
                               kmeans)


def two_blobs(n=100, gap=8.0, seed=0):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, 2))
    b = rng.standard_normal((n, 2)) + np.array([gap, 0.0])
    return np.vstack([a, b])


class TestKMeans:
    def test_recovers_separated_blobs(self):
        X = two_blobs()
        c = kmeans(X, 2, seed=0)
        left, right = c.assignments[:100], c.assignments[100:]
        assert len(np.unique(left)) == 1
        assert len(np.unique(right)) == 1
        assert left[0] != right[0]

    def test_centroids_near_blob_means(self):
        X = two_blobs()
        c = kmeans(X, 2, seed=1)
        got = sorted(c.centroids[:, 0])
        assert got[0] == pytest.approx(0.0, abs=0.5)
        assert got[1] == pytest.approx(8.0, abs=0.5)

    def test_determinism(self):
        X = two_blobs(seed=3)
        a = kmeans(X, 2, seed=5)
        b = kmeans(X, 2, seed=5)
        np.testing.assert_array_equal(a.assignments, b.assignments)
        assert a.inertia == b.inertia

    def test_restarts_never_hurt(self):
        # the first candidate of the n_init=10 stream is the n_init=1 run
        X = two_blobs(n=40, gap=3.0, seed=9)
        single = kmeans(X, 2, seed=4, n_init=1)
        multi = kmeans(X, 2, seed=4, n_init=10)
        assert multi.inertia <= single.inertia + 1e-9

    def test_inertia_trace_non_increasing(self):
        X = two_blobs(n=60, gap=2.0, seed=2)
        c = kmeans(X, 2, seed=0, n_init=1)
        trace = np.array(c.inertia_trace)
        assert (np.diff(trace) <= 1e-9).all()

    def test_too_few_distinct_points(self):
        with pytest.raises(ClusteringError):
            kmeans(np.zeros((5, 2)), 2)

    def test_bad_n_init(self):
        with pytest.raises(ClusteringError):
            kmeans(two_blobs(), 2, n_init=0)


class TestConstraints:
    def test_conflicting_pair_rejected(self):
        with pytest.raises(ClusteringError):
            Constraints(((0, 1),), ((1, 0),))

    def test_out_of_range_index(self):
        cons = Constraints(((0, 99),), ())
        with pytest.raises(ClusteringError):
            constrained_kmeans(two_blobs(n=10), cons, 2)


class TestConstrainedKMeans:
    def test_must_link_forces_co_assignment(self):
        X = two_blobs(n=20)
        # tie each left point to one right point
        cons = Constraints(tuple((i, 20 + i) for i in range(5)), ())
        c = constrained_kmeans(X, cons, 2, seed=0)
        assert c is not None
        for i in range(5):
            assert c.assignments[i] == c.assignments[20 + i]

    def test_cannot_link_forces_separation(self):
        X = two_blobs(n=20)
        cons = Constraints((), ((0, 1), (2, 3)))
        c = constrained_kmeans(X, cons, 2, seed=0)
        assert c is not None
        assert c.assignments[0] != c.assignments[1]
        assert c.assignments[2] != c.assignments[3]

    def test_infeasible_returns_none(self):
        # an odd cannot-link cycle cannot be 2-colored
        X = two_blobs(n=10)
        cons = Constraints((), ((0, 1), (1, 2), (2, 0)))
        assert constrained_kmeans(X, cons, 2, seed=0) is None

    def test_no_constraints_matches_blob_structure(self):
        X = two_blobs()
        c = constrained_kmeans(X, Constraints((), ()), 2, seed=0)
        assert len(np.unique(c.assignments[:100])) == 1
        assert len(np.unique(c.assignments[100:])) == 1

    def test_determinism(self):
        X = two_blobs(n=30, seed=8)
        cons = Constraints(((0, 30),), ((1, 2),))
        a = constrained_kmeans(X, cons, 2, seed=3)
        b = constrained_kmeans(X, cons, 2, seed=3)
        np.testing.assert_array_equal(a.assignments, b.assignments)


class TestClusterClassifier:
    def _clustering(self, sizes):
        assign = np.array([0] * sizes[0] + [1] * sizes[1])
        cents = np.array([[0.0, 0.0], [8.0, 0.0]])
        return Clustering(assign, cents, 1.0)

    def test_low_prior_puts_minority_on_smaller_cluster(self):
        clf = clusters_to_classes(self._clustering((7, 3)), 0.3)
        # hint < 1/2: majority class is -1, so the big cluster gets -1
        np.testing.assert_array_equal(clf.cluster_labels, [-1, 1])

    def test_high_prior_flips_mapping(self):
        clf = clusters_to_classes(self._clustering((7, 3)), 0.7)
        np.testing.assert_array_equal(clf.cluster_labels, [1, -1])

    def test_tie_break_first_centroid_positive(self):
        clf = clusters_to_classes(self._clustering((5, 5)), 0.3)
        np.testing.assert_array_equal(clf.cluster_labels, [1, -1])

    def test_predict_nearest_centroid(self):
        clf = clusters_to_classes(self._clustering((7, 3)), 0.3)
        pred = clf.predict(np.array([[0.1, 0.0], [7.5, 0.2]]))
        np.testing.assert_array_equal(pred, [-1, 1])

    def test_requires_two_clusters(self):
        c = Clustering(np.zeros(4, dtype=int), np.zeros((3, 2)), 1.0)
        with pytest.raises(ClusteringError):
            clusters_to_classes(c, 0.3)

    def test_bad_prior_hint(self):
        with pytest.raises(ClusteringError):
            clusters_to_classes(self._clustering((5, 5)), 0.0)
