"""Differentiable predictors (linear, two-hidden-layer MLP), the SGD
trainer with classic momentum, gradient verification and serialization.

Scores live in (-1, 1): t = 2*sigmoid(z) - 1 = tanh(z/2), where z is the
network's pre-activation output.  This lets a logistic-sigmoid output
head regress onto +-1 targets with the squared loss.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import get_kernels
from .data import SDPoints
from .losses import PerExampleLoss

HIDDEN = 100


class TrainingDiverged(RuntimeError):
    """Non-finite loss encountered; carries epoch and batch index."""

    def __init__(self, epoch, batch):
        super().__init__(f"non-finite loss at epoch {epoch}, batch {batch}")
        self.epoch = epoch
        self.batch = batch


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.001
    momentum: float = 0.9
    epochs: int = 200
    batch_size: int = 64
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError("momentum must lie in [0, 1)")
        if self.epochs < 0 or self.batch_size < 1:
            raise ValueError("bad epochs or batch_size")


@dataclass(frozen=True)
class Predictor:
    arch: str  # "linear" | "mlp"
    d: int
    params: tuple

    def __post_init__(self):
        for p in self.params:
            p.setflags(write=False)

    @property
    def n_params(self) -> int:
        return sum(p.size for p in self.params)


@dataclass(frozen=True)
class TrainResult:
    predictor: Predictor
    epoch_losses: list


def _shapes(arch, d):
    if arch == "linear":
        return [(d,), (1,)]
    if arch == "mlp":
        return [(d, HIDDEN), (HIDDEN,), (HIDDEN, HIDDEN), (HIDDEN,),
                (HIDDEN,), (1,)]
    raise ValueError(f"unknown architecture {arch!r}")


def init_predictor(arch: str, d: int, seed) -> Predictor:
    """Weights uniform in +-1/sqrt(fan_in); biases zero."""
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = np.random.default_rng(seed)
    params = []
    for shape in _shapes(arch, d):
        if len(shape) == 2 or (arch == "mlp" and shape == (HIDDEN,)
                               and len(params) == 4):
            fan_in = shape[0]
            params.append(rng.uniform(-1.0, 1.0, shape) / np.sqrt(fan_in))
        elif arch == "linear" and shape == (d,):
            params.append(rng.uniform(-1.0, 1.0, shape) / np.sqrt(d))
        else:
            params.append(np.zeros(shape))
    return Predictor(arch, d, tuple(params))


def forward(p: Predictor, X):
    """Score(s) in (-1, 1) for a single vector or an (n, d) batch."""
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    Xb = X[None, :] if single else X
    if Xb.shape[1] != p.d:
        raise ValueError(f"dimension mismatch: expected {p.d}, got {Xb.shape[1]}")
    if p.arch == "linear":
        w, b = p.params
        z = Xb @ w + b[0]
    else:
        W1, b1, W2, b2, w3, b3 = p.params
        Z1 = np.maximum(Xb @ W1 + b1, 0.0)
        Z2 = np.maximum(Z1 @ W2 + b2, 0.0)
        z = Z2 @ w3 + b3[0]
    t = np.tanh(0.5 * z)
    return float(t[0]) if single else t


def batch_gradients(p: Predictor, X, q, loss: PerExampleLoss):
    """Mean loss and mean parameter gradients on a batch (pure numpy).

    Reference implementation of the kernel math; used by gradient_check
    and by backend-parity tests.
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    q = np.atleast_1d(np.asarray(q))
    B = X.shape[0]
    if p.arch == "linear":
        w, b = p.params
        z = X @ w + b[0]
    else:
        W1, b1, W2, b2, w3, b3 = p.params
        A1 = X @ W1 + b1
        Z1 = np.maximum(A1, 0.0)
        A2 = Z1 @ W2 + b2
        Z2 = np.maximum(A2, 0.0)
        z = Z2 @ w3 + b3[0]
    t = np.tanh(0.5 * z)
    mean_loss = float(np.mean(loss.value(t, q)))
    dz = loss.deriv(t, q) * 0.5 * (1.0 - t * t) / B
    if p.arch == "linear":
        return mean_loss, (X.T @ dz, np.array([dz.sum()]))
    gw3 = Z2.T @ dz
    gb3 = np.array([dz.sum()])
    dA2 = np.where(A2 > 0.0, np.outer(dz, w3), 0.0)
    gW2 = Z1.T @ dA2
    gb2 = dA2.sum(axis=0)
    dA1 = np.where(A1 > 0.0, dA2 @ W2.T, 0.0)
    gW1 = X.T @ dA1
    gb1 = dA1.sum(axis=0)
    return mean_loss, (gW1, gb1, gW2, gb2, gw3, gb3)


def sgd_train(p: Predictor, data: SDPoints, loss: PerExampleLoss,
              cfg: TrainConfig) -> TrainResult:
    """Classic momentum SGD: v <- mu*v - lr*grad, w <- w + v.

    Data is reshuffled every epoch from the config seed; deterministic
    per (data, config, backend).
    """
    if data.n < 1:
        raise ValueError("empty training data")
    if data.d != p.d:
        raise ValueError("dimension mismatch between predictor and data")
    # writable contiguous copies: predictor params are frozen read-only
    params = [np.array(a, dtype=np.float64, order="C") for a in p.params]
    vels = [np.zeros_like(a) for a in params]
    u_pos, v_pos, u_neg, v_neg, base_id = loss.coefficient_arrays()
    linear_epoch, mlp_epoch = get_kernels()
    kernel = linear_epoch if p.arch == "linear" else mlp_epoch
    rng = np.random.default_rng(cfg.seed)
    X = np.ascontiguousarray(data.X)
    q = np.ascontiguousarray(data.q)
    history = []
    for epoch in range(cfg.epochs):
        order = rng.permutation(data.n)
        mean_loss, bad = kernel(*params, *vels, X, q, order,
                                u_pos, v_pos, u_neg, v_neg, base_id,
                                cfg.learning_rate, cfg.momentum,
                                cfg.batch_size)
        if bad >= 0 or not np.isfinite(mean_loss):
            raise TrainingDiverged(epoch, bad)
        history.append(float(mean_loss))
    return TrainResult(Predictor(p.arch, p.d, tuple(params)), history)


def has_relu_kink(p: Predictor, x, tol: float = 1e-4) -> bool:
    """Whether any hidden pre-activation sits within tol of zero (where
    finite differences of the rectifier are unreliable)."""
    if p.arch == "linear":
        return False
    W1, b1, W2, b2, _, _ = p.params
    x = np.asarray(x, dtype=np.float64)
    A1 = x @ W1 + b1
    A2 = np.maximum(A1, 0.0) @ W2 + b2
    return bool(np.min(np.abs(A1)) < tol or np.min(np.abs(A2)) < tol)


def gradient_check(p: Predictor, loss: PerExampleLoss, x, q,
                   step: float = 1e-6, max_coords: int = 60,
                   seed: int = 0) -> float:
    """Max relative error between analytic and central-difference
    gradients on one sample.

    For the MLP, max_coords randomly chosen parameter coordinates are
    perturbed (checking all ~13k is needlessly slow); the linear model is
    checked exhaustively.  Near-zero gradient pairs (both below 1e-9) are
    scored as exact.
    """
    x = np.asarray(x, dtype=np.float64)
    _, grads = batch_gradients(p, x, q, loss)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for pi, (param, grad) in enumerate(zip(p.params, grads)):
        flat_idx = np.arange(param.size)
        if p.arch == "mlp" and param.size > max_coords:
            flat_idx = rng.choice(param.size, size=max_coords, replace=False)
        for j in flat_idx:
            plus = [a.copy() for a in p.params]
            plus[pi].flat[j] += step
            lp = float(loss.value(
                forward(Predictor(p.arch, p.d, tuple(plus)), x), q))
            minus = [a.copy() for a in p.params]
            minus[pi].flat[j] -= step
            lm = float(loss.value(
                forward(Predictor(p.arch, p.d, tuple(minus)), x), q))
            num = (lp - lm) / (2 * step)
            ana = grad.flat[j]
            if abs(num) < 1e-9 and abs(ana) < 1e-9:
                continue
            worst = max(worst, abs(num - ana) / max(abs(num), abs(ana)))
    return worst


def save_predictor(p: Predictor, path):
    """Flat binary format: architecture tag, input dimension, and the
    parameter arrays concatenated row-major."""
    flat = np.concatenate([a.ravel() for a in p.params])
    np.savez(path, arch=p.arch, d=p.d, params=flat)


def load_predictor(path) -> Predictor:
    with np.load(path, allow_pickle=False) as f:
        arch = str(f["arch"])
        d = int(f["d"])
        flat = f["params"]
    params = []
    pos = 0
    for shape in _shapes(arch, d):
        size = int(np.prod(shape))
        params.append(flat[pos:pos + size].reshape(shape).copy())
        pos += size
    if pos != flat.size:
        raise ValueError("parameter payload does not match architecture")
    return Predictor(arch, d, tuple(params))
