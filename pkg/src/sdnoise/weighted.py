"""Weighted (cost-sensitive) classification on noisy S-D tags.

Minimizing the alpha-weighted 0-1 risk on the noisy point-wise data, with
alpha = (alpha1 + alpha2)/2 from the posterior mixing coefficients,
recovers the clean Bayes classifier up to a deterministic sign flip.  The
noisy risk is linearly related to the clean risk with scale
A = (alpha1 - alpha2)/2; when A < 0 the minimizer is the negation of the
clean Bayes classifier, so classification applies a sign flip.

The weighted 0-1 loss puts weight (1-alpha) on tag +1 errors and alpha on
tag -1 errors; the surrogate used for training follows the same
convention:  l_alpha(t, q) = (1-alpha) 1[q=+1] g(t) + alpha 1[q=-1] g(-t).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .losses import PerExampleLoss
from .noise import NoiseModel, posterior_coefficients

THRESHOLD_TOL = 1e-12


class DegenerateThreshold(ValueError):
    """The Bayes-threshold denominator vanishes (no posterior contrast)."""


@dataclass(frozen=True)
class WeightedRiskParams:
    """Weight alpha, linear-relation scale A, Bayes cut on the clean
    posterior, and whether predictions must be sign-flipped (A < 0)."""

    alpha: float
    A: float
    threshold: float
    flip_sign: bool


def weighted_params(noise: NoiseModel, pi: float) -> WeightedRiskParams:
    c = posterior_coefficients(noise, pi)
    denom = c.alpha1 - c.alpha2
    if abs(denom) <= THRESHOLD_TOL:
        raise DegenerateThreshold(
            "posterior contrast alpha1 - alpha2 vanishes; "
            "threshold undefined")
    alpha = 0.5 * (c.alpha1 + c.alpha2)
    A = 0.5 * denom
    threshold = (0.5 - c.alpha2) / denom
    return WeightedRiskParams(alpha, A, threshold, A < 0.0)


def make_weighted_loss(alpha: float, base: str = "squared") -> PerExampleLoss:
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    return PerExampleLoss(base, 1.0 - alpha, 0.0, 0.0, alpha)


def weighted_loss(alpha: float, base: str, t, q):
    """(1-alpha) 1[q=+1] g(t) + alpha 1[q=-1] g(-t)."""
    return make_weighted_loss(alpha, base).value(t, q)


def weighted_zero_one_risk(q, scores, alpha: float) -> float:
    """Empirical mean of the alpha-weighted 0-1 loss.

    Errors on q=+1 (score <= 0) cost (1-alpha); errors on q=-1
    (score > 0) cost alpha.
    """
    q = np.asarray(q)
    scores = np.asarray(scores, dtype=np.float64)
    if q.shape != scores.shape:
        raise ValueError("scores must align with tags")
    pos_err = (q == 1) & (scores <= 0.0)
    neg_err = (q == -1) & (scores > 0.0)
    return float(np.mean((1.0 - alpha) * pos_err + alpha * neg_err))


def classify(scores, params: WeightedRiskParams):
    """sign(score) with the tie at 0 resolved to +1, negated when A < 0."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.where(scores >= 0.0, 1, -1)
    return -labels if params.flip_sign else labels
