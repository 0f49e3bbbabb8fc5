"""Class-prior recovery from Similar/Dissimilar counts and
cross-validation of noise rates / the weight alpha on noisy pairs.

The prior is identifiable from pair counts only up to the {pi, 1-pi}
branch ambiguity; every estimator therefore takes an explicit branch tag
("low" or "high", or a float hint resolved to the nearest root).

Forward models (the probability of a Similar tag as a function of pi):

* pairing -- (1-rho_s)*s + rho_d*(1-s) with s = pi^2 + (1-pi)^2, inverted
  in closed form;
* labeling -- pt^2 + (1-pt)^2 with pt the modified prior, inverted by a
  dense grid scan plus bisection on each sign-change bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import PairSet, flatten_pairs
from .models import TrainConfig, forward, init_predictor, sgd_train
from .noise import (LabelingNoise, NoiseModel, PairingNoise,
                    expected_similar_fraction)


class EstimationError(ValueError):
    pass


class InfeasibleRatio(EstimationError):
    """Observed S/D ratio inconsistent with the noise model at these rates."""


class NegativeCoefficient(EstimationError):
    """Ratio-equation coefficients lose their sign structure."""


class NoRoot(EstimationError):
    """The observed ratio lies outside the forward model's range."""


@dataclass(frozen=True)
class PriorEstimate:
    pi: float
    branch: str  # "low" | "high"
    residual: float
    all_roots: tuple = ()


def _select_branch(roots, branch):
    roots = sorted(roots)
    if branch == "low":
        return roots[0]
    if branch == "high":
        return roots[-1]
    hint = float(branch)
    return min(roots, key=lambda r: abs(r - hint))


def _residual(noise, pi, n_s, n_d):
    return abs(expected_similar_fraction(noise, pi) - n_s / (n_s + n_d))


def estimate_prior_pairing(n_s, n_d, rho_s, rho_d, branch="low") -> PriorEstimate:
    """Closed-form inversion of the pairing-model S/D count ratio."""
    if n_s < 1 or n_d < 1:
        raise EstimationError("need at least one Similar and one Dissimilar pair")
    noise = PairingNoise(rho_s, rho_d)
    r = n_s / n_d
    c1 = (1.0 - rho_s) - r * rho_s
    c2 = r * (1.0 - rho_d) - rho_d
    if c1 + c2 <= 0.0:
        raise NegativeCoefficient("c1 + c2 <= 0 for the observed ratio")
    d = c1 / (c1 + c2)  # implied dissimilar mass 2*pi*(1-pi)
    if not 0.0 <= d <= 0.5:
        raise InfeasibleRatio(
            f"implied dissimilar mass {d:.4f} outside [0, 1/2]")
    root = math.sqrt(max(0.0, 1.0 - 2.0 * d))
    roots = ((1.0 - root) / 2.0, (1.0 + root) / 2.0)
    pi = _select_branch(roots, branch)
    pi = min(max(pi, 1e-12), 1.0 - 1e-12)
    tag = "low" if pi <= min(roots) + 1e-15 else "high"
    return PriorEstimate(pi, tag, _residual(noise, pi, n_s, n_d), roots)


def labeling_similar_fraction(pi, rho_plus, rho_minus) -> float:
    noise = LabelingNoise(rho_plus, rho_minus)
    return expected_similar_fraction(noise, pi)


def estimate_prior_labeling(n_s, n_d, rho_plus, rho_minus,
                            branch="low") -> PriorEstimate:
    """Grid scan + bisection inversion of the labeling-model ratio."""
    if n_s < 1 or n_d < 1:
        raise EstimationError("need at least one Similar and one Dissimilar pair")
    noise = LabelingNoise(rho_plus, rho_minus)
    target = n_s / (n_s + n_d)

    def f(pi):
        return expected_similar_fraction(noise, pi) - target

    grid = np.linspace(0.001, 0.999, 2000)
    vals = np.array([f(p) for p in grid])
    roots = []
    for i in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0):
        lo, hi = grid[i], grid[i + 1]
        flo = f(lo)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            fm = f(mid)
            if flo * fm <= 0:
                hi = mid
            else:
                lo, flo = mid, fm
        roots.append(0.5 * (lo + hi))
    # collapse near-duplicate brackets (exact zeros hit twice)
    uniq = []
    for r in sorted(roots):
        if not uniq or abs(r - uniq[-1]) > 1e-7:
            uniq.append(r)
    if not uniq:
        raise NoRoot(
            f"observed Similar fraction {target:.4f} outside the model range")
    pi = _select_branch(uniq, branch)
    tag = "low" if pi <= min(uniq) + 1e-15 else "high"
    return PriorEstimate(pi, tag, _residual(noise, pi, n_s, n_d), tuple(uniq))


def estimate_prior_from_pairs(pairs: PairSet, noise: NoiseModel,
                              branch="low") -> PriorEstimate:
    n_s = int(np.sum(pairs.q == 1))
    n_d = pairs.n - n_s
    if isinstance(noise, PairingNoise):
        return estimate_prior_pairing(n_s, n_d, *noise.rates, branch)
    return estimate_prior_labeling(n_s, n_d, *noise.rates, branch)


@dataclass(frozen=True)
class CVReport:
    candidates: tuple
    scores: tuple
    selected_index: int
    folds: int
    flags: tuple = ()

    @property
    def selected(self):
        return self.candidates[self.selected_index]

    def to_rows(self):
        return [
            {"candidate": c, "score": s, "selected": i == self.selected_index}
            for i, (c, s) in enumerate(zip(self.candidates, self.scores))
        ]


def _fold_indices(n, folds, seed):
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    return np.array_split(perm, folds)


def _candidate_seed(base_seed, fold, cand):
    return int(np.random.SeedSequence((base_seed, fold, cand))
               .generate_state(1)[0])


def cross_validate(pairs: PairSet, method: str, grid, folds: int, seed,
                   pi: float | None = None, noise_kind: str = "pairing",
                   base: str = "squared", arch: str = "linear",
                   train_cfg: TrainConfig | None = None,
                   branch="low") -> CVReport:
    """k-fold selection of noise rates (loss_correction) or alpha (weighted).

    Pairs, not flattened points, are the fold unit, so a pair's two points
    never straddle folds.  Scores: held-out mean corrected loss for
    loss_correction; held-out weighted 0-1 risk (the candidate's alpha)
    for weighted.  Ties break toward smaller candidates.
    """
    from .correction import make_corrected_loss
    from .weighted import make_weighted_loss, weighted_zero_one_risk

    grid = list(grid)
    if folds < 2:
        raise EstimationError("folds must be >= 2")
    if not grid:
        raise EstimationError("empty candidate grid")
    if folds > pairs.n:
        raise EstimationError("more folds than pairs")
    if method not in ("loss_correction", "weighted"):
        raise EstimationError(f"unknown method {method!r}")
    if train_cfg is None:
        train_cfg = TrainConfig(epochs=30, seed=seed)
    fold_idx = _fold_indices(pairs.n, folds, seed)
    flags = []
    scores = np.zeros(len(grid))
    for f, val_idx in enumerate(fold_idx):
        mask = np.ones(pairs.n, dtype=bool)
        mask[val_idx] = False
        tr = PairSet(pairs.X[mask], pairs.X_prime[mask], pairs.q[mask])
        va = PairSet(pairs.X[val_idx], pairs.X_prime[val_idx], pairs.q[val_idx])
        if len(np.unique(va.q)) < 2:
            flags.append(f"fold {f} has a single tag class")
        tr_pts, va_pts = flatten_pairs(tr), flatten_pairs(va)
        for ci, cand in enumerate(grid):
            cseed = _candidate_seed(seed, f, ci)
            cfg = TrainConfig(train_cfg.learning_rate, train_cfg.momentum,
                              train_cfg.epochs, train_cfg.batch_size, cseed)
            if method == "loss_correction":
                r1, r2 = cand
                noise = (PairingNoise(r1, r2) if noise_kind == "pairing"
                         else LabelingNoise(r1, r2))
                cand_pi = pi
                if cand_pi is None:
                    cand_pi = estimate_prior_from_pairs(tr, noise, branch).pi
                loss = make_corrected_loss(noise, cand_pi, base)
                model = sgd_train(init_predictor(arch, tr_pts.d, cseed),
                                  tr_pts, loss, cfg).predictor
                scores[ci] += float(np.mean(
                    loss.value(forward(model, va_pts.X), va_pts.q)))
            else:
                alpha = float(cand)
                loss = make_weighted_loss(alpha, base)
                model = sgd_train(init_predictor(arch, tr_pts.d, cseed),
                                  tr_pts, loss, cfg).predictor
                scores[ci] += weighted_zero_one_risk(
                    va_pts.q, forward(model, va_pts.X), alpha)
    scores /= folds
    order = sorted(range(len(grid)),
                   key=lambda i: (scores[i], np.sum(np.atleast_1d(grid[i]))))
    return CVReport(tuple(grid), tuple(float(s) for s in scores), order[0],
                    folds, tuple(flags))
