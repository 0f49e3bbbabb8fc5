"""The two corruption processes on S-D supervision and their exact
population-level descriptions (posterior mixing coefficients, modified
prior, Similar-tag probability, corrupted-marginal mixtures).

Two noise models are supported:

* pairing corruption -- a correctly formed pair has its Similar/Dissimilar
  tag flipped with rates (rho_s for S->D, rho_d for D->S);
* labeling corruption -- individual class labels flip first (rates
  rho_plus for +1 -> -1, rho_minus for -1 -> +1) and pairs are then tagged
  noiselessly from the flipped labels.

Zero rates in either model encode the clean case.

The posterior mixing coefficients write P(Q=+1|x) = a1*eta(x) + a2*(1-eta(x))
(and the complements for Q=-1).  For the labeling model these are derived
directly from the generative process:

    a1 = (1-rho_plus)*pt + rho_plus*(1-pt)
    a2 = rho_minus*pt + (1-rho_minus)*(1-pt),    pt = modified prior.

This is the form consistent with the corrupted Similar marginal, with the
threshold denominators and with the weighted-risk constants; it is the
unique choice under which the backward-corrected loss is unbiased.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .data import Dataset, PairSet


class NoiseError(ValueError):
    """Invalid noise-rate configuration."""


def _check_rates(r1, r2, names):
    if not (0.0 <= r1 < 0.5 and 0.0 <= r2 < 0.5):
        raise NoiseError(f"{names[0]} and {names[1]} must lie in [0, 0.5)")
    if r1 + r2 >= 1.0:
        raise NoiseError(f"{names[0]} + {names[1]} must be < 1")


@dataclass(frozen=True)
class PairingNoise:
    """Tag-flip rates: Similar->Dissimilar rho_s, Dissimilar->Similar rho_d."""

    rho_s: float = 0.0
    rho_d: float = 0.0

    def __post_init__(self):
        _check_rates(self.rho_s, self.rho_d, ("rho_s", "rho_d"))

    @property
    def rates(self):
        return (self.rho_s, self.rho_d)


@dataclass(frozen=True)
class LabelingNoise:
    """Class-label flip rates: +1 flips with rho_plus, -1 with rho_minus."""

    rho_plus: float = 0.0
    rho_minus: float = 0.0

    def __post_init__(self):
        _check_rates(self.rho_plus, self.rho_minus, ("rho_plus", "rho_minus"))

    @property
    def rates(self):
        return (self.rho_plus, self.rho_minus)


NoiseModel = Union[PairingNoise, LabelingNoise]


def noise_to_dict(noise: NoiseModel) -> dict:
    kind = "pairing" if isinstance(noise, PairingNoise) else "labeling"
    return {"model": kind, "rates": list(noise.rates)}


def noise_from_dict(spec: dict) -> NoiseModel:
    kind = spec["model"]
    r1, r2 = spec["rates"]
    if kind == "pairing":
        return PairingNoise(r1, r2)
    if kind == "labeling":
        return LabelingNoise(r1, r2)
    raise NoiseError(f"unknown noise model {kind!r}")


@dataclass(frozen=True)
class PosteriorCoefficients:
    """Mixing of the clean class posterior into the noisy tag posterior.

    P(Q=+1|x) = alpha1*eta(x) + alpha2*(1-eta(x));
    P(Q=-1|x) = beta1*eta(x) + beta2*(1-eta(x)).
    Columns are complementary: alpha1+beta1 = alpha2+beta2 = 1.
    """

    alpha1: float
    alpha2: float
    beta1: float
    beta2: float


def _check_pi(pi):
    if not 0.0 < pi < 1.0:
        raise NoiseError("pi must lie strictly in (0, 1)")


def modified_prior(pi: float, noise: LabelingNoise) -> float:
    """Positive-class probability after label flipping."""
    _check_pi(pi)
    return pi * (1.0 - noise.rho_plus) + (1.0 - pi) * noise.rho_minus


def posterior_coefficients(noise: NoiseModel, pi: float) -> PosteriorCoefficients:
    _check_pi(pi)
    if isinstance(noise, PairingNoise):
        rs, rd = noise.rho_s, noise.rho_d
        a1 = (1.0 - rs) * pi + rd * (1.0 - pi)
        a2 = rd * pi + (1.0 - rs) * (1.0 - pi)
    else:
        rp, rm = noise.rho_plus, noise.rho_minus
        pt = modified_prior(pi, noise)
        a1 = (1.0 - rp) * pt + rp * (1.0 - pt)
        a2 = rm * pt + (1.0 - rm) * (1.0 - pt)
    return PosteriorCoefficients(a1, a2, 1.0 - a1, 1.0 - a2)


@dataclass(frozen=True)
class MixtureWeights:
    """Corrupted Similar marginal as a two-component density mixture.

    components names the reference densities; raw holds the unnormalized
    flip weights, weights the normalized mixture proportions (sum to 1).
    """

    components: tuple
    raw: tuple
    weights: tuple


def noisy_similar_mixture_weights(noise: NoiseModel, pi: float) -> MixtureWeights:
    _check_pi(pi)
    if isinstance(noise, PairingNoise):
        s = pi * pi + (1.0 - pi) ** 2
        d = 1.0 - s
        raw = (1.0 - noise.rho_s, noise.rho_d)
        z = raw[0] * s + raw[1] * d
        return MixtureWeights(("similar", "dissimilar"), raw,
                              (raw[0] * s / z, raw[1] * d / z))
    rp, rm = noise.rho_plus, noise.rho_minus
    pt = modified_prior(pi, noise)
    z = pt * pt + (1.0 - pt) ** 2
    w_pos = pi * ((1.0 - rp) * pt + rp * (1.0 - pt)) / z
    w_neg = (1.0 - pi) * (rm * pt + (1.0 - rm) * (1.0 - pt)) / z
    return MixtureWeights(("positive", "negative"), (w_pos, w_neg),
                          (w_pos, w_neg))


def expected_similar_fraction(noise: NoiseModel, pi: float) -> float:
    """P(Q=+1) under the noisy pairing process."""
    _check_pi(pi)
    if isinstance(noise, PairingNoise):
        s = pi * pi + (1.0 - pi) ** 2
        return (1.0 - noise.rho_s) * s + noise.rho_d * (1.0 - s)
    pt = modified_prior(pi, noise)
    return pt * pt + (1.0 - pt) ** 2


def sample_clean_pairs(dataset: Dataset, n_pairs: int, seed) -> PairSet:
    """Draw pairs uniformly with replacement; q = +1 iff labels agree."""
    if dataset.n < 2:
        raise NoiseError("need at least 2 points to form pairs")
    if n_pairs < 1:
        raise NoiseError("n_pairs must be >= 1")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, dataset.n, size=(n_pairs, 2))
    q = np.where(dataset.y[idx[:, 0]] == dataset.y[idx[:, 1]], 1, -1)
    return PairSet(dataset.X[idx[:, 0]], dataset.X[idx[:, 1]], q)


def corrupt_pairing(pairs: PairSet, noise: PairingNoise, seed) -> PairSet:
    """Flip each Similar tag with rho_s and each Dissimilar tag with rho_d."""
    rng = np.random.default_rng(seed)
    u = rng.random(pairs.n)
    flip = np.where(pairs.q == 1, u < noise.rho_s, u < noise.rho_d)
    return PairSet(pairs.X, pairs.X_prime, np.where(flip, -pairs.q, pairs.q))


def corrupt_labeling(dataset: Dataset, noise: LabelingNoise, seed) -> Dataset:
    """Flip +1 labels with rho_plus and -1 labels with rho_minus.

    Pairs subsequently formed from the returned dataset carry noiseless
    tags with respect to the flipped labels.
    """
    rng = np.random.default_rng(seed)
    u = rng.random(dataset.n)
    flip = np.where(dataset.y == 1, u < noise.rho_plus, u < noise.rho_minus)
    return Dataset(dataset.X, np.where(flip, -dataset.y, dataset.y))
