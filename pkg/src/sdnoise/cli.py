"""Command-line entry point.

Subcommands: simulate, train, evaluate, run, sweep-noise, sweep-samples,
baseline, estimate-prior, bench.  Each experiment is driven by one JSON
config file (see experiment.load_spec).  Relative output paths resolve
under $SDNOISE_OUTDIR (default: current directory).  Exit code 0 on
success; nonzero with a stage diagnostic on stderr otherwise.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .backend import backend_name
from .data import SDPoints, SplitSpec, split
from .estimation import estimate_prior_labeling, estimate_prior_pairing
from .experiment import (ExperimentSpec, _resolve, _seed, emit_report, fit,
                         load_spec, make_noisy_pairs, materialize_dataset,
                         run, sweep_noise, sweep_samples)
from .losses import plain_loss
from .models import (TrainConfig, forward, init_predictor, load_predictor,
                     save_predictor, sgd_train)


def _split_for_repeat(spec: ExperimentSpec, repeat: int):
    dataset = materialize_dataset(spec.dataset)
    return split(dataset, SplitSpec(spec.train_fraction,
                                    _seed(spec.seed + repeat, "split")))


def cmd_simulate(args):
    spec = load_spec(args.config)
    train, _ = _split_for_repeat(spec, args.repeat)
    pairs = make_noisy_pairs(train, spec, args.repeat)
    out = _resolve(args.out)
    header = ([f"x_{j}" for j in range(pairs.d)]
              + [f"xp_{j}" for j in range(pairs.d)] + ["q"])
    body = np.hstack([pairs.X, pairs.X_prime, pairs.q[:, None]])
    np.savetxt(out, body, delimiter=",", header=",".join(header), comments="")
    print(f"wrote {pairs.n} pairs to {out}")
    return 0


def cmd_train(args):
    spec = load_spec(args.config)
    train, _ = _split_for_repeat(spec, args.repeat)
    model, flip, selected = fit(spec, train, args.repeat)
    out = _resolve(args.out)
    save_predictor(model, out)
    print(f"saved {model.arch} predictor ({model.n_params} parameters) "
          f"to {out}")
    if selected is not None:
        print(f"cross-validation selected: {selected}")
    if flip:
        print("note: predictions must be sign-flipped (pass --flip-sign "
              "to evaluate)")
    return 0


def cmd_evaluate(args):
    model = load_predictor(args.model)
    spec = load_spec(args.config)
    _, test = _split_for_repeat(spec, args.repeat)
    y_pred = np.where(forward(model, test.X) >= 0.0, 1, -1)
    if args.flip_sign:
        y_pred = -y_pred
    acc = float(np.mean(y_pred == test.y))
    print(f"test accuracy: {acc:.4f}  ({test.n} points)")
    return 0


def _run_and_report(spec, out, fmt):
    report = run(spec)
    if out:
        path = emit_report(report, fmt, out)
        print(f"wrote report to {path}")
    accs = " ".join(f"{a:.4f}" for a in report.accuracies)
    print(f"{spec.method}: accuracies [{accs}]"
          + (f"  mean {report.mean:.4f} std {report.std:.4f}"
             if report.mean is not None else ""))
    for err in report.errors:
        print(f"partial: {err}", file=sys.stderr)
    return 1 if report.errors else 0


def cmd_run(args):
    spec = load_spec(args.config)
    return _run_and_report(spec, args.out or spec.output, args.format)


def cmd_baseline(args):
    spec = load_spec(args.config)
    if spec.method not in ("km", "km_cop"):
        print(f"baseline requires method km or km_cop, got {spec.method!r}",
              file=sys.stderr)
        return 2
    return _run_and_report(spec, args.out or spec.output, args.format)


def cmd_sweep_noise(args):
    spec = load_spec(args.config)
    rates = [float(r) for r in args.rates.split(",")]
    rows = sweep_noise(spec, rates, args.out)
    for rate, mean in rows:
        print(f"{rate} {mean}")
    return 0


def cmd_sweep_samples(args):
    spec = load_spec(args.config)
    sizes = [int(s) for s in args.sizes.split(",")]
    rows = sweep_samples(spec, sizes, args.out)
    for n, mean in rows:
        print(f"{n} {mean}")
    return 0


def cmd_estimate_prior(args):
    r1, r2 = (float(r) for r in args.rates.split(","))
    branch = args.branch
    if branch not in ("low", "high"):
        branch = float(branch)
    if args.model == "pairing":
        est = estimate_prior_pairing(args.ns, args.nd, r1, r2, branch)
    else:
        est = estimate_prior_labeling(args.ns, args.nd, r1, r2, branch)
    print(json.dumps({"pi": est.pi, "branch": est.branch,
                      "residual": est.residual,
                      "all_roots": list(est.all_roots)}))
    return 0


def cmd_bench(args):
    import os

    rng = np.random.default_rng(0)
    X = rng.standard_normal((args.n, args.d))
    y = np.where(X[:, 0] + rng.standard_normal(args.n) > 0, 1, -1)
    data = SDPoints(X, y)
    loss = plain_loss()
    cfg = TrainConfig(epochs=args.epochs, seed=0)
    results = {}
    for backend in ("numpy", "numba"):
        os.environ["SDNOISE_BACKEND"] = backend
        try:
            sgd_train(init_predictor(args.arch, args.d, 0), data, loss,
                      TrainConfig(epochs=1, seed=0))  # warm up / compile
            start = time.perf_counter()
            sgd_train(init_predictor(args.arch, args.d, 0), data, loss, cfg)
            results[backend] = time.perf_counter() - start
        except ImportError:
            results[backend] = None
    os.environ.pop("SDNOISE_BACKEND", None)
    for backend, elapsed in results.items():
        if elapsed is None:
            print(f"{backend}: unavailable")
        else:
            print(f"{backend}: {elapsed:.3f} s for {args.epochs} epochs "
                  f"({args.arch}, n={args.n}, d={args.d})")
    if all(results.values()):
        print(f"speedup (numpy/numba): {results['numpy'] / results['numba']:.2f}x")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sdnoise",
        description="Train classifiers from noisy Similar/Dissimilar pairs.")
    p.add_argument("--version", action="version", version="sdnoise 1.0.0")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("simulate", cmd_simulate, "emit one repeat's noisy pairs to CSV")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--repeat", type=int, default=0)

    sp = add("train", cmd_train, "train one repeat's predictor and save it")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--repeat", type=int, default=0)

    sp = add("evaluate", cmd_evaluate,
             "score a saved predictor on the clean test split")
    sp.add_argument("--model", required=True)
    sp.add_argument("--config", required=True)
    sp.add_argument("--repeat", type=int, default=0)
    sp.add_argument("--flip-sign", action="store_true")

    sp = add("run", cmd_run, "full experiment: repeats + aggregation")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out")
    sp.add_argument("--format", default="json-lines",
                    choices=("table", "json-lines", "plot-data"))

    sp = add("baseline", cmd_baseline, "run a clustering baseline (km/km_cop)")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out")
    sp.add_argument("--format", default="json-lines",
                    choices=("table", "json-lines", "plot-data"))

    sp = add("sweep-noise", cmd_sweep_noise,
             "accuracy vs symmetric noise rate")
    sp.add_argument("--config", required=True)
    sp.add_argument("--rates", required=True,
                    help="comma-separated ascending rates, e.g. 0,0.1,0.2")
    sp.add_argument("--out")

    sp = add("sweep-samples", cmd_sweep_samples, "accuracy vs pair count")
    sp.add_argument("--config", required=True)
    sp.add_argument("--sizes", required=True,
                    help="comma-separated ascending pair counts")
    sp.add_argument("--out")

    sp = add("estimate-prior", cmd_estimate_prior,
             "recover the class prior from S/D counts")
    sp.add_argument("--model", required=True, choices=("pairing", "labeling"))
    sp.add_argument("--ns", type=int, required=True,
                    help="number of Similar pairs")
    sp.add_argument("--nd", type=int, required=True,
                    help="number of Dissimilar pairs")
    sp.add_argument("--rates", required=True,
                    help="comma-separated noise rates, e.g. 0.2,0.1")
    sp.add_argument("--branch", default="low",
                    help="'low', 'high', or a float hint")

    sp = add("bench", cmd_bench, "time the numpy vs numba training kernels")
    sp.add_argument("--arch", default="mlp", choices=("linear", "mlp"))
    sp.add_argument("--n", type=int, default=20000)
    sp.add_argument("--d", type=int, default=10)
    sp.add_argument("--epochs", type=int, default=5)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error [{args.command}] ({backend_name()} backend): {exc}",
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
