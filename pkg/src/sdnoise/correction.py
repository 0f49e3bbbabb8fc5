"""Backward loss correction for noisy S-D tags.

The 2x2 mixing matrix stacks the posterior coefficients as rows
(alpha1, alpha2; beta1, beta2); it is column-stochastic.  The corrected
loss replaces the base-loss pair (l(t,+1), l(t,-1)) by a fixed linear
combination so that the expected corrected loss under the noisy (X, Q)
law equals the expected base loss under the clean (X, Y) law.

Unbiasedness pins the combination uniquely: the corrected pair is the
transpose of the matrix inverse applied to the base pair ("unbiased"
convention, the default).  The direct inverse without the transpose is
kept available ("direct_inverse") because the convexity certificate below
describes that combination; the two coincide whenever the matrix is
symmetric, in particular in the clean case.  A corollary of the column
sums being 1 is that under the unbiased convention each corrected branch
inherits the base loss's second derivative, so the corrected squared and
logistic losses are always convex in the score.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .losses import PerExampleLoss
from .noise import (LabelingNoise, NoiseModel, PairingNoise, modified_prior,
                    posterior_coefficients)

SINGULAR_TOL = 1e-8


class SingularCorrection(ValueError):
    """Mixing matrix is numerically singular (prior at 1/2 or rate sum 1)."""


class DegenerateRate(ValueError):
    """A rate of exactly 1/2 makes the convexity ratio undefined."""


@dataclass(frozen=True)
class CorrectionMatrix:
    """Posterior mixing matrix with rows (alpha1, alpha2), (beta1, beta2)."""

    entries: np.ndarray
    det: float

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.float64)
        if e.shape != (2, 2):
            raise ValueError("entries must be 2x2")
        object.__setattr__(self, "entries", e)
        self.entries.setflags(write=False)


def build_T(noise: NoiseModel, pi: float) -> CorrectionMatrix:
    c = posterior_coefficients(noise, pi)
    entries = np.array([[c.alpha1, c.alpha2], [c.beta1, c.beta2]])
    det = c.alpha1 * c.beta2 - c.alpha2 * c.beta1
    if abs(det) <= SINGULAR_TOL:
        raise SingularCorrection(
            f"mixing matrix singular (det={det:.3e}); "
            "prior 1/2 or rate sum 1 is not correctable")
    return CorrectionMatrix(entries, det)


def invert_T(T: CorrectionMatrix) -> np.ndarray:
    """Closed-form 2x2 inverse."""
    if abs(T.det) <= SINGULAR_TOL:
        raise SingularCorrection("matrix is singular")
    (a1, a2), (b1, b2) = T.entries
    return np.array([[b2, -a2], [-b1, a1]]) / T.det


def make_corrected_loss(noise: NoiseModel, pi: float, base: str = "squared",
                        convention: str = "unbiased") -> PerExampleLoss:
    """Corrected per-example loss l~(t, q) for training on noisy tags."""
    T = build_T(noise, pi)
    inv = invert_T(T)
    if convention == "unbiased":
        rows = inv.T
    elif convention == "direct_inverse":
        rows = inv
    else:
        raise ValueError(f"unknown convention {convention!r}")
    # row q=+1 weights (l(t,+1), l(t,-1)) = (g(t), g(-t)); row q=-1 likewise
    return PerExampleLoss(base, rows[0, 0], rows[0, 1], rows[1, 0], rows[1, 1])


def corrected_loss(loss: PerExampleLoss, t, q):
    """Evaluate a corrected (or any coefficient-form) loss."""
    return loss.value(t, q)


def convexity_condition(noise: NoiseModel, pi: float) -> bool:
    """Whether the direct-inverse corrected loss stays convex.

    True iff the rate ratio (1-2r1)/(1-2r2) lies in the closed interval
    between p/(1-p) and (1-p)/p, where p is the prior (pairing) or the
    modified prior (labeling).
    """
    if isinstance(noise, PairingNoise):
        r1, r2 = noise.rho_s, noise.rho_d
        p = pi
        if not 0.0 < pi < 1.0:
            raise ValueError("pi must lie in (0, 1)")
    else:
        r1, r2 = noise.rho_plus, noise.rho_minus
        p = modified_prior(pi, noise)
    if abs(1.0 - 2.0 * r2) < 1e-15 or abs(1.0 - 2.0 * r1) < 1e-15:
        raise DegenerateRate("rate of exactly 1/2 leaves the ratio undefined")
    ratio = (1.0 - 2.0 * r1) / (1.0 - 2.0 * r2)
    lo, hi = sorted((p / (1.0 - p), (1.0 - p) / p))
    return lo <= ratio <= hi
