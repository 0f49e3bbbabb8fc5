"""Benchmark the numpy and numba training kernels against each other.

Runs the same SGD workload under both backends (selected through the
SDNOISE_BACKEND environment variable), checks that the final parameters
agree, and prints per-backend wall-clock times with the speedup.

Usage:
    python benchmarks/bench_backends.py [--n 20000] [--d 10] [--epochs 10]
"""

import argparse
import os
import time

import numpy as np

from sdnoise.data import SDPoints
from sdnoise.losses import plain_loss
from sdnoise.models import TrainConfig, init_predictor, sgd_train


def make_workload(n, d, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, d))
    q = np.where(X[:, 0] + 0.5 * rng.standard_normal(n) > 0, 1, -1)
    return SDPoints(X, q)


def time_backend(backend, arch, data, epochs):
    os.environ["SDNOISE_BACKEND"] = backend
    loss = plain_loss()
    # warm-up: triggers (cached) jit compilation outside the timed region
    sgd_train(init_predictor(arch, data.d, 0), data, loss,
              TrainConfig(epochs=1, seed=0))
    start = time.perf_counter()
    result = sgd_train(init_predictor(arch, data.d, 0), data, loss,
                       TrainConfig(epochs=epochs, seed=0))
    return time.perf_counter() - start, result.predictor


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--d", type=int, default=10)
    ap.add_argument("--epochs", type=int, default=10)
    args = ap.parse_args()

    data = make_workload(args.n, args.d)
    print(f"workload: n={args.n}, d={args.d}, {args.epochs} epochs\n")
    saved = os.environ.get("SDNOISE_BACKEND")
    try:
        for arch in ("linear", "mlp"):
            times = {}
            models = {}
            for backend in ("numpy", "numba"):
                times[backend], models[backend] = time_backend(
                    backend, arch, data, args.epochs)
                print(f"{arch:6s} {backend:5s}: {times[backend]:8.3f} s")
            drift = max(float(np.max(np.abs(a - b))) for a, b in
                        zip(models["numpy"].params, models["numba"].params))
            print(f"{arch:6s} speedup: {times['numpy'] / times['numba']:.2f}x"
                  f"  (max param drift {drift:.2e})\n")
    finally:
        if saved is None:
            os.environ.pop("SDNOISE_BACKEND", None)
        else:
            os.environ["SDNOISE_BACKEND"] = saved


if __name__ == "__main__":
    main()
