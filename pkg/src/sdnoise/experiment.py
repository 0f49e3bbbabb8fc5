"""End-to-end experiment orchestration.

Pipeline per repeat: split -> corrupt (per noise model) -> sample pairs ->
flatten -> (cross-validate if a grid is given) -> train by method ->
evaluate standard accuracy on the clean held-out class-labeled test set.
Repeats are aggregated; partial results are reported as partial, never
averaged silently.
"""

from __future__ import annotations

import json
import os
import time
import zlib
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from . import data as dat
from . import noise as nz
from .baselines import Constraints, clusters_to_classes, constrained_kmeans, kmeans
from .correction import make_corrected_loss
from .data import Dataset, SplitSpec, flatten_pairs, split
from .estimation import cross_validate, estimate_prior_from_pairs
from .models import TrainConfig, forward, init_predictor, sgd_train
from .noise import (LabelingNoise, NoiseModel, PairingNoise, corrupt_labeling,
                    corrupt_pairing, sample_clean_pairs)
from .weighted import make_weighted_loss, weighted_params

METHODS = ("t_loss", "sd_loss_clean", "weighted", "unweighted", "km", "km_cop")


class StageError(RuntimeError):
    def __init__(self, stage, seed, cause):
        super().__init__(f"stage {stage!r} failed (seed {seed}): {cause}")
        self.stage = stage
        self.seed = seed


def _seed(*parts) -> int:
    # zlib.crc32, not hash(): str hashing is salted per process, which
    # would break reproducibility across CLI invocations
    enc = tuple(zlib.crc32(p.encode()) if isinstance(p, str) else int(p)
                for p in parts)
    return int(np.random.SeedSequence(enc).generate_state(1)[0])


@dataclass(frozen=True)
class ExperimentSpec:
    dataset: dict
    noise: NoiseModel
    method: str
    n_pairs: int | None = None  # None -> 10x training-set size
    repeats: int = 3
    train_fraction: float = 0.75
    seed: int = 0
    train: TrainConfig = field(default_factory=TrainConfig)
    arch: str | None = None  # None -> linear for gaussian, mlp otherwise
    base_loss: str = "squared"
    cv_grid: tuple | None = None
    cv_folds: int = 5
    pi_hint: object = "low"  # "low" | "high" | float
    constraint_cap: int = 4000
    output: str | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        if self.n_pairs is not None and self.n_pairs < 1:
            raise ValueError("n_pairs must be >= 1")


def spec_from_dict(cfg: dict) -> ExperimentSpec:
    cfg = dict(cfg)
    noise = nz.noise_from_dict(cfg.pop("noise"))
    train = TrainConfig(**cfg.pop("train", {}))
    cv_grid = cfg.pop("cv_grid", None)
    if cv_grid is not None:
        cv_grid = tuple(tuple(c) if isinstance(c, (list, tuple)) else c
                        for c in cv_grid)
    return ExperimentSpec(noise=noise, train=train, cv_grid=cv_grid, **cfg)


def load_spec(path) -> ExperimentSpec:
    return spec_from_dict(json.loads(Path(path).read_text()))


def materialize_dataset(ref: dict) -> Dataset:
    kind = ref.get("kind", "manifest")
    if kind == "gaussian":
        return dat.generate_gaussian_dataset(
            ref.get("n", 20000), ref.get("pi", 0.2),
            ref.get("mean_pos", (2.0, 2.0)), ref.get("mean_neg", (-2.0, -2.0)),
            ref.get("seed", 0))
    if kind == "csv":
        return dat.load_csv_dataset(ref["path"], ref["label_column"],
                                    ref["positive_value"],
                                    ref.get("one_hot_columns", ()))
    if kind == "manifest":
        return dat.load_manifest(ref["path"])
    raise ValueError(f"unknown dataset kind {kind!r}")


@dataclass(frozen=True)
class RunReport:
    method: str
    accuracies: tuple
    mean: float | None
    std: float | None
    selected_params: tuple
    wall_clock: float
    seeds: tuple
    errors: tuple = ()

    @property
    def partial(self) -> bool:
        return bool(self.errors)

    def to_dict(self) -> dict:
        return asdict(self)


def _make_noisy_pairs(train: Dataset, spec: ExperimentSpec, rseed):
    n_pairs = spec.n_pairs if spec.n_pairs is not None else 10 * train.n
    if isinstance(spec.noise, PairingNoise):
        pairs = sample_clean_pairs(train, n_pairs, _seed(rseed, "pairs"))
        return corrupt_pairing(pairs, spec.noise, _seed(rseed, "corrupt"))
    corrupted = corrupt_labeling(train, spec.noise, _seed(rseed, "corrupt"))
    return sample_clean_pairs(corrupted, n_pairs, _seed(rseed, "pairs"))


def _pick_arch(spec: ExperimentSpec) -> str:
    if spec.arch is not None:
        return spec.arch
    return "linear" if spec.dataset.get("kind") == "gaussian" else "mlp"


def _zero_noise_like(noise: NoiseModel) -> NoiseModel:
    return PairingNoise() if isinstance(noise, PairingNoise) else LabelingNoise()


def _noise_kind(noise: NoiseModel) -> str:
    return "pairing" if isinstance(noise, PairingNoise) else "labeling"


def make_noisy_pairs(train: Dataset, spec: ExperimentSpec, repeat: int = 0):
    """The noisy training pairs of one repeat (used by run and by the CLI)."""
    return _make_noisy_pairs(train, spec, spec.seed + repeat)


def _select_params(spec: ExperimentSpec, pairs, rseed):
    """Cross-validated parameter choice for t_loss / weighted, else None."""
    if spec.cv_grid is None or spec.method not in ("t_loss", "weighted"):
        return None
    cv_method = "loss_correction" if spec.method == "t_loss" else "weighted"
    report = cross_validate(
        pairs, cv_method, spec.cv_grid, spec.cv_folds, _seed(rseed, "cv"),
        pi=None, noise_kind=_noise_kind(spec.noise), base=spec.base_loss,
        arch="linear", branch=spec.pi_hint)
    return report.selected


def fit(spec: ExperimentSpec, train: Dataset, repeat: int = 0):
    """Train one predictor on one repeat's noisy pairs (ERM methods only).

    Returns (predictor, flip_sign, selected_cv_params).  flip_sign is
    always False for the loss-correction methods; for the weighted methods
    it comes from the sign of the risk-relation scale.
    """
    if spec.method in ("km", "km_cop"):
        raise ValueError(f"method {spec.method!r} trains no predictor")
    rseed = spec.seed + repeat
    pairs = _make_noisy_pairs(train, spec, rseed)
    points = flatten_pairs(pairs)
    pi_hat = estimate_prior_from_pairs(pairs, spec.noise, spec.pi_hint).pi
    selected = _select_params(spec, pairs, rseed)
    arch = _pick_arch(spec)
    cfg = TrainConfig(spec.train.learning_rate, spec.train.momentum,
                      spec.train.epochs, spec.train.batch_size,
                      _seed(rseed, "train"))
    if spec.method in ("t_loss", "sd_loss_clean"):
        if spec.method == "sd_loss_clean":
            noise = _zero_noise_like(spec.noise)
            pi_hat = estimate_prior_from_pairs(pairs, noise, spec.pi_hint).pi
        elif selected is not None:
            noise = type(spec.noise)(*selected)
            pi_hat = estimate_prior_from_pairs(pairs, noise, spec.pi_hint).pi
        else:
            noise = spec.noise
        loss = make_corrected_loss(noise, pi_hat, spec.base_loss)
        flip = False
    else:  # weighted / unweighted
        params = weighted_params(spec.noise, pi_hat)
        if spec.method == "unweighted":
            alpha = 0.5
        elif selected is not None:
            alpha = float(selected)
        else:
            alpha = params.alpha
        loss = make_weighted_loss(alpha, spec.base_loss)
        flip = params.flip_sign
    model = sgd_train(init_predictor(arch, points.d, _seed(rseed, "init")),
                      points, loss, cfg).predictor
    return model, flip, selected


def _cluster_accuracy(spec: ExperimentSpec, train, test, rseed):
    pairs = _make_noisy_pairs(train, spec, rseed)
    points = flatten_pairs(pairs)
    pi_hat = estimate_prior_from_pairs(pairs, spec.noise, spec.pi_hint).pi
    if spec.method == "km":
        clustering = kmeans(points.X, 2, seed=_seed(rseed, "km"))
    else:
        m = min(pairs.n, spec.constraint_cap)
        ml = tuple((2 * k, 2 * k + 1) for k in range(m) if pairs.q[k] == 1)
        cl = tuple((2 * k, 2 * k + 1) for k in range(m) if pairs.q[k] == -1)
        clustering = constrained_kmeans(points.X, Constraints(ml, cl), 2,
                                        seed=_seed(rseed, "km"))
        if clustering is None:
            raise RuntimeError("infeasible constraint set")
    clf = clusters_to_classes(clustering, pi_hat)
    return float(np.mean(clf.predict(test.X) == test.y))


def _run_once(spec: ExperimentSpec, dataset: Dataset, repeat: int):
    rseed = spec.seed + repeat
    stage = "split"
    try:
        train, test = split(dataset,
                            SplitSpec(spec.train_fraction, _seed(rseed, "split")))
        if spec.method in ("km", "km_cop"):
            stage = spec.method
            return _cluster_accuracy(spec, train, test, rseed), None
        stage = "train"
        model, flip, selected = fit(spec, train, repeat)
        stage = "evaluate"
        scores = forward(model, test.X)
        y_pred = np.where(scores >= 0.0, 1, -1)
        if flip:
            y_pred = -y_pred
        return float(np.mean(y_pred == test.y)), selected
    except Exception as exc:
        raise StageError(stage, rseed, exc) from exc


def run(spec: ExperimentSpec) -> RunReport:
    start = time.perf_counter()
    dataset = materialize_dataset(spec.dataset)
    accs, sels, seeds, errors = [], [], [], []
    for i in range(spec.repeats):
        seeds.append(spec.seed + i)
        try:
            acc, sel = _run_once(spec, dataset, i)
            accs.append(acc)
            sels.append(sel)
        except StageError as exc:
            errors.append(str(exc))
    # a partial report carries errors alongside the completed-repeat mean
    mean = float(np.mean(accs)) if accs else None
    std = float(np.std(accs)) if accs else None
    return RunReport(spec.method, tuple(accs), mean, std, tuple(sels),
                     time.perf_counter() - start, tuple(seeds), tuple(errors))


def _with(spec: ExperimentSpec, **overrides) -> ExperimentSpec:
    d = {f: getattr(spec, f) for f in spec.__dataclass_fields__}
    d.update(overrides)
    return ExperimentSpec(**d)


def sweep_noise(spec: ExperimentSpec, rates, output=None):
    """One run per symmetric rate; returns [(rate, mean_accuracy)] rows."""
    if list(rates) != sorted(rates):
        raise ValueError("rates must be sorted ascending")
    cls = type(spec.noise)
    rows = []
    for r in rates:
        report = run(_with(spec, noise=cls(r, r)))
        rows.append((float(r), report.mean))
    if output:
        write_plot_data(rows, output)
    return rows


def sweep_samples(spec: ExperimentSpec, sizes, output=None):
    """One run per pair count; returns [(n_pairs, mean_accuracy)] rows."""
    sizes = [int(s) for s in sizes]
    if sizes != sorted(sizes):
        raise ValueError("sizes must be sorted ascending")
    if any(s < 1 for s in sizes):
        raise ValueError("n_pairs must be >= 1")
    rows = []
    for s in sizes:
        report = run(_with(spec, n_pairs=s))
        rows.append((s, report.mean))
    if output:
        write_plot_data(rows, output)
    return rows


def output_dir() -> Path:
    return Path(os.environ.get("SDNOISE_OUTDIR", "."))


def _resolve(path) -> Path:
    path = Path(path)
    out = path if path.is_absolute() else output_dir() / path
    out.parent.mkdir(parents=True, exist_ok=True)
    return out


def write_plot_data(rows, path):
    """Whitespace-separated numeric columns, one row per sweep point."""
    out = _resolve(path)
    out.write_text("".join(f"{a} {b}\n" for a, b in rows))
    return out


def emit_report(report: RunReport, fmt: str, path):
    out = _resolve(path)
    if fmt == "json-lines":
        out.write_text(json.dumps(report.to_dict(), sort_keys=True) + "\n")
    elif fmt == "table":
        lines = [f"method: {report.method}"]
        for i, acc in enumerate(report.accuracies):
            lines.append(f"  repeat {i}  seed {report.seeds[i]}  "
                         f"accuracy {acc:.4f}")
        if report.mean is not None:
            lines.append(f"  mean {report.mean:.4f}  std {report.std:.4f}")
        for err in report.errors:
            lines.append(f"  ERROR {err}")
        out.write_text("\n".join(lines) + "\n")
    elif fmt == "plot-data":
        rows = list(enumerate(report.accuracies))
        out.write_text("".join(f"{i} {a}\n" for i, a in rows))
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return out


def load_report(path) -> RunReport:
    d = json.loads(Path(path).read_text())
    for k in ("accuracies", "selected_params", "seeds", "errors"):
        d[k] = tuple(tuple(v) if isinstance(v, list) else v for v in d[k])
    return RunReport(**d)
