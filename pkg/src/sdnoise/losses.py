"""Per-example margin losses in coefficient form.

Every loss this package trains with can be written as

    l(t, q) = u_q * g(t) + v_q * g(-t)

where g is the positive-class branch of a base margin loss (squared or
logistic) and (u, v) depend only on the tag q in {+1, -1}.  The base
losses satisfy l(t, -1) = l(-t, +1), so the coefficient form covers the
plain loss, the backward-corrected losses and the weighted surrogate with
a single evaluation path, which is also what the training kernels consume.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BASE_SQUARED = 0
BASE_LOGISTIC = 1

_BASE_IDS = {"squared": BASE_SQUARED, "logistic": BASE_LOGISTIC}


def base_value(base_id, t):
    """g(t): loss of score t against the +1 tag."""
    t = np.asarray(t, dtype=np.float64)
    if base_id == BASE_SQUARED:
        return (1.0 - t) ** 2
    return np.logaddexp(0.0, -t)


def base_deriv(base_id, t):
    """g'(t)."""
    t = np.asarray(t, dtype=np.float64)
    if base_id == BASE_SQUARED:
        return 2.0 * (t - 1.0)
    return -1.0 / (1.0 + np.exp(t))


@dataclass(frozen=True)
class PerExampleLoss:
    """Loss l(t, q) = u_q g(t) + v_q g(-t) with analytic derivative in t."""

    base: str
    u_pos: float
    v_pos: float
    u_neg: float
    v_neg: float

    def __post_init__(self):
        if self.base not in _BASE_IDS:
            raise ValueError(f"unknown base loss {self.base!r}")

    @property
    def base_id(self) -> int:
        return _BASE_IDS[self.base]

    def coefficients(self, q):
        q = np.asarray(q)
        u = np.where(q == 1, self.u_pos, self.u_neg)
        v = np.where(q == 1, self.v_pos, self.v_neg)
        return u, v

    def value(self, t, q):
        u, v = self.coefficients(q)
        b = self.base_id
        return u * base_value(b, t) + v * base_value(b, -np.asarray(t))

    def deriv(self, t, q):
        """d/dt of value; note d/dt g(-t) = -g'(-t)."""
        u, v = self.coefficients(q)
        b = self.base_id
        return u * base_deriv(b, t) - v * base_deriv(b, -np.asarray(t))

    def coefficient_arrays(self):
        """(u_pos, v_pos, u_neg, v_neg, base_id) for the training kernels."""
        return (self.u_pos, self.v_pos, self.u_neg, self.v_neg, self.base_id)


def plain_loss(base: str = "squared") -> PerExampleLoss:
    """The uncorrected base loss against the observed tag."""
    return PerExampleLoss(base, 1.0, 0.0, 0.0, 1.0)
