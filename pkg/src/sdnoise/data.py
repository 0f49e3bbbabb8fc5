"""Datasets, pair records, synthetic generators, CSV ingestion and splits.

All containers are array-backed and immutable after construction.  Every
sampling operation takes an explicit seed and is deterministic given it.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np
import pandas as pd


class DataError(ValueError):
    """Invalid dataset construction or ingestion input."""


class LabeledPoint(NamedTuple):
    x: np.ndarray
    y: int  # +1 or -1


class PairPoint(NamedTuple):
    x: np.ndarray
    x_prime: np.ndarray
    q: int  # +1 Similar, -1 Dissimilar


class PointwiseSDPoint(NamedTuple):
    x: np.ndarray
    q: int


def _check_pm1(arr, name):
    if not np.all(np.isin(arr, (-1, 1))):
        raise DataError(f"{name} must take values in {{+1, -1}}")


@dataclass(frozen=True)
class Dataset:
    """Class-labeled points: features X (n, d) and labels y (n,) in {+1, -1}."""

    X: np.ndarray
    y: np.ndarray
    dropped_columns: tuple = ()

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.int64)
        if X.ndim != 2 or X.shape[0] < 1:
            raise DataError("X must be a non-empty (n, d) array")
        if y.shape != (X.shape[0],):
            raise DataError("y must align with X rows")
        _check_pm1(y, "y")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        self.X.setflags(write=False)
        self.y.setflags(write=False)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def prior(self) -> float:
        """Empirical fraction of y = +1."""
        return float(np.mean(self.y == 1))

    @property
    def usable(self) -> bool:
        return 0.0 < self.prior < 1.0

    def __len__(self):
        return self.n

    def __getitem__(self, i) -> LabeledPoint:
        return LabeledPoint(self.X[i], int(self.y[i]))

    @property
    def points(self):
        return [self[i] for i in range(self.n)]


@dataclass(frozen=True)
class PairSet:
    """Pairs (x, x') with Similar/Dissimilar tags q in {+1, -1}."""

    X: np.ndarray
    X_prime: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        Xp = np.asarray(self.X_prime, dtype=np.float64)
        q = np.asarray(self.q, dtype=np.int64)
        if X.shape != Xp.shape or X.ndim != 2:
            raise DataError("X and X_prime must be equal-shape (m, d) arrays")
        if q.shape != (X.shape[0],):
            raise DataError("q must align with pairs")
        _check_pm1(q, "q")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "X_prime", Xp)
        object.__setattr__(self, "q", q)
        for a in (self.X, self.X_prime, self.q):
            a.setflags(write=False)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def __len__(self):
        return self.n

    def __getitem__(self, i) -> PairPoint:
        return PairPoint(self.X[i], self.X_prime[i], int(self.q[i]))


@dataclass(frozen=True)
class SDPoints:
    """Point-wise view of S-D supervision: features X (k, d), tags q (k,)."""

    X: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        q = np.asarray(self.q, dtype=np.int64)
        if X.ndim != 2 or q.shape != (X.shape[0],):
            raise DataError("X must be (k, d) with aligned q")
        _check_pm1(q, "q")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "q", q)
        self.X.setflags(write=False)
        self.q.setflags(write=False)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def __len__(self):
        return self.n

    def __getitem__(self, i) -> PointwiseSDPoint:
        return PointwiseSDPoint(self.X[i], int(self.q[i]))


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.75
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise DataError("train_fraction must lie in (0, 1)")


def generate_gaussian_dataset(n, pi, mean_pos, mean_neg, seed) -> Dataset:
    """Two isotropic unit-variance Gaussian classes with positive prior pi."""
    if n < 1:
        raise DataError("n must be >= 1")
    if not 0.0 < pi < 1.0:
        raise DataError("pi must lie strictly in (0, 1)")
    mean_pos = np.asarray(mean_pos, dtype=np.float64)
    mean_neg = np.asarray(mean_neg, dtype=np.float64)
    if mean_pos.shape != mean_neg.shape or mean_pos.ndim != 1:
        raise DataError("class means must be 1-D vectors of equal length")
    rng = np.random.default_rng(seed)
    y = np.where(rng.random(n) < pi, 1, -1)
    X = rng.standard_normal((n, mean_pos.size))
    X += np.where(y[:, None] == 1, mean_pos[None, :], mean_neg[None, :])
    return Dataset(X, y)


def standardize(X, mean=None, std=None):
    """Zero-mean unit-variance per column; constant columns are dropped.

    Returns (X_std, mean, std, kept) where kept is the boolean column mask.
    """
    X = np.asarray(X, dtype=np.float64)
    if mean is None:
        mean = X.mean(axis=0)
        std = X.std(axis=0)
    kept = std > 1e-12
    return (X[:, kept] - mean[kept]) / std[kept], mean, std, kept


def load_csv_dataset(path, label_column, positive_value,
                     one_hot_columns=()) -> Dataset:
    """Load a comma-separated file into a standardized +-1 labeled Dataset.

    Categorical columns named in one_hot_columns are one-hot expanded.
    Features are standardized per column on the full loaded set; constant
    columns are dropped with a warning.  Rows are rejected (error) when they
    fail to parse; labels not equal to positive_value map to -1.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    try:
        df = pd.read_csv(path)
    except Exception as exc:  # noqa: BLE001 - surface parse failures uniformly
        raise DataError(f"unparseable CSV {path}: {exc}") from exc
    if df.isna().any().any():
        df = df.dropna()
        if len(df) == 0:
            raise DataError("all rows rejected (missing values)")
    if isinstance(label_column, int):
        label_column = df.columns[label_column]
    if label_column not in df.columns:
        raise DataError(f"label column {label_column!r} not found")
    labels = df[label_column]
    if not (labels.astype(str) == str(positive_value)).any():
        raise DataError(
            f"positive label token {positive_value!r} never occurs")
    y = np.where(labels.astype(str) == str(positive_value), 1, -1)
    feats = df.drop(columns=[label_column])
    one_hot = [c if not isinstance(c, int) else feats.columns[c]
               for c in one_hot_columns]
    for c in one_hot:
        if c not in feats.columns:
            raise DataError(f"one-hot column {c!r} not found")
    if one_hot:
        feats = pd.get_dummies(feats, columns=list(one_hot), dtype=np.float64)
    try:
        X = feats.to_numpy(dtype=np.float64)
    except Exception as exc:  # noqa: BLE001
        raise DataError(f"non-numeric feature column: {exc}") from exc
    X_std, _, _, kept = standardize(X)
    dropped = tuple(np.asarray(feats.columns)[~kept])
    if dropped:
        warnings.warn(f"dropped constant columns: {dropped}", stacklevel=2)
    ds = Dataset(X_std, y, dropped_columns=dropped)
    return ds


def load_manifest(path) -> Dataset:
    """Load a dataset from a JSON manifest naming path, label column,
    positive token and one-hot columns.  The CSV path is resolved relative
    to the manifest file."""
    path = Path(path)
    spec = json.loads(path.read_text())
    csv_path = Path(spec["path"])
    if not csv_path.is_absolute():
        csv_path = path.parent / csv_path
    return load_csv_dataset(
        csv_path,
        spec["label_column"],
        spec["positive_value"],
        spec.get("one_hot_columns", ()),
    )


def split(dataset: Dataset, spec: SplitSpec):
    """Disjoint, exhaustive train/test split; train size floor(fraction * n)."""
    if dataset.n < 4:
        raise DataError("dataset too small to split")
    rng = np.random.default_rng(spec.seed)
    perm = rng.permutation(dataset.n)
    n_train = int(np.floor(spec.train_fraction * dataset.n))
    tr, te = perm[:n_train], perm[n_train:]
    return (Dataset(dataset.X[tr], dataset.y[tr]),
            Dataset(dataset.X[te], dataset.y[te]))


def flatten_pairs(pairs: PairSet) -> SDPoints:
    """Treat S-D pairs as point-wise data: each pair yields (x, q), (x', q)."""
    if pairs.n == 0:
        raise DataError("empty pair collection")
    X = np.empty((2 * pairs.n, pairs.d))
    X[0::2] = pairs.X
    X[1::2] = pairs.X_prime
    q = np.repeat(pairs.q, 2)
    return SDPoints(X, q)
