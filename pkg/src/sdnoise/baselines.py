"""Clustering baselines: 2-means and constraint-respecting 2-means
(must-link / cannot-link), plus the cluster-to-class mapping used to
score them as classifiers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ClusteringError(ValueError):
    pass


@dataclass(frozen=True)
class Clustering:
    assignments: np.ndarray
    centroids: np.ndarray
    inertia: float
    inertia_trace: tuple = ()


@dataclass(frozen=True)
class Constraints:
    must_links: tuple
    cannot_links: tuple

    def __post_init__(self):
        ml = tuple((int(a), int(b)) for a, b in self.must_links)
        cl = tuple((int(a), int(b)) for a, b in self.cannot_links)
        canon = lambda pairs: {tuple(sorted(p)) for p in pairs}  # noqa: E731
        if canon(ml) & canon(cl):
            raise ClusteringError("a pair appears as both must- and cannot-link")
        object.__setattr__(self, "must_links", ml)
        object.__setattr__(self, "cannot_links", cl)

    def validate_indices(self, n):
        for a, b in self.must_links + self.cannot_links:
            if not (0 <= a < n and 0 <= b < n):
                raise ClusteringError(f"constraint index ({a},{b}) out of range")


def _kmeanspp_init(X, k, rng):
    n = X.shape[0]
    centroids = np.empty((k, X.shape[1]))
    centroids[0] = X[rng.integers(n)]
    d2 = np.sum((X - centroids[0]) ** 2, axis=1)
    for j in range(1, k):
        probs = d2 / d2.sum() if d2.sum() > 0 else np.full(n, 1.0 / n)
        centroids[j] = X[rng.choice(n, p=probs)]
        d2 = np.minimum(d2, np.sum((X - centroids[j]) ** 2, axis=1))
    return centroids


def _update_centroids(X, assign, centroids):
    new = centroids.copy()
    for j in range(centroids.shape[0]):
        members = X[assign == j]
        if len(members):  # empty clusters keep their previous centroid
            new[j] = members.mean(axis=0)
    return new


def _inertia(X, assign, centroids):
    return float(np.sum((X - centroids[assign]) ** 2))


def _lloyd(X, k, max_iters, rng):
    centroids = _kmeanspp_init(X, k, rng)
    assign = np.full(X.shape[0], -1)
    trace = []
    for _ in range(max_iters):
        d2 = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_assign = d2.argmin(axis=1)
        centroids = _update_centroids(X, new_assign, centroids)
        trace.append(_inertia(X, new_assign, centroids))
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
    return Clustering(assign, centroids, trace[-1], tuple(trace))


def kmeans(points, k: int = 2, max_iters: int = 100, seed=0,
           n_init: int = 10) -> Clustering:
    """Lloyd iterations from k-means++ seeding; best inertia of n_init runs."""
    X = np.asarray(points, dtype=np.float64)
    if len(np.unique(X, axis=0)) < k:
        raise ClusteringError(f"fewer than {k} distinct points")
    if n_init < 1:
        raise ClusteringError("n_init must be >= 1")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(n_init):
        cand = _lloyd(X, k, max_iters, rng)
        if best is None or cand.inertia < best.inertia:
            best = cand
    return best


def _cop_lloyd(X, must, cannot, k, max_iters, rng):
    n = X.shape[0]
    centroids = _kmeanspp_init(X, k, rng)
    assign = np.full(n, -1)
    trace = []
    for _ in range(max_iters):
        d2 = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_assign = np.full(n, -1)
        for i in range(n):
            for j in np.argsort(d2[i], kind="stable"):
                ok = all(new_assign[m] in (-1, j) for m in must[i])
                ok = ok and all(new_assign[c] != j for c in cannot[i])
                if ok:
                    new_assign[i] = j
                    break
            if new_assign[i] == -1:
                return None
        centroids = _update_centroids(X, new_assign, centroids)
        trace.append(_inertia(X, new_assign, centroids))
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
    return Clustering(assign, centroids, trace[-1], tuple(trace))


def constrained_kmeans(points, constraints: Constraints, k: int = 2,
                       max_iters: int = 100, seed=0, n_init: int = 10):
    """COP-style clustering: points are assigned in input order to the
    nearest centroid that violates no constraint against points already
    assigned this iteration.  Keeps the best inertia over n_init feasible
    restarts; returns None when every restart hits a point with no
    feasible centroid (e.g. an odd cannot-link cycle with k=2).
    """
    X = np.asarray(points, dtype=np.float64)
    if len(np.unique(X, axis=0)) < k:
        raise ClusteringError(f"fewer than {k} distinct points")
    if n_init < 1:
        raise ClusteringError("n_init must be >= 1")
    constraints.validate_indices(X.shape[0])
    n = X.shape[0]
    must = [[] for _ in range(n)]
    cannot = [[] for _ in range(n)]
    for a, b in constraints.must_links:
        must[a].append(b)
        must[b].append(a)
    for a, b in constraints.cannot_links:
        cannot[a].append(b)
        cannot[b].append(a)
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(n_init):
        cand = _cop_lloyd(X, must, cannot, k, max_iters, rng)
        if cand is not None and (best is None or cand.inertia < best.inertia):
            best = cand
    return best


@dataclass(frozen=True)
class ClusterClassifier:
    centroids: np.ndarray
    cluster_labels: np.ndarray  # +-1 per cluster

    def predict(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        d2 = ((X[:, None, :] - self.centroids[None, :, :]) ** 2).sum(axis=2)
        return self.cluster_labels[d2.argmin(axis=1)]


def clusters_to_classes(clustering: Clustering,
                        prior_hint: float) -> ClusterClassifier:
    """Map the larger cluster to the majority class under the prior hint.

    hint >= 1/2 puts +1 on the larger cluster; equal sizes break the tie
    by giving the first centroid +1 when the hint favors +1.
    """
    if clustering.centroids.shape[0] != 2:
        raise ClusteringError("class mapping requires exactly two clusters")
    if not 0.0 < prior_hint < 1.0:
        raise ClusteringError("prior_hint must lie in (0, 1)")
    sizes = np.bincount(clustering.assignments, minlength=2)
    major = 1 if prior_hint >= 0.5 else -1
    if sizes[0] > sizes[1]:
        labels = np.array([major, -major])
    elif sizes[1] > sizes[0]:
        labels = np.array([-major, major])
    else:
        labels = np.array([1, -1])  # documented tie-break: first centroid +1
    return ClusterClassifier(clustering.centroids, labels)
