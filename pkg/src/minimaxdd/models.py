"""Gaussian shift observation model realizing a prescribed robust error.

Observations are N(0, 1) under the null and N(mu, 1) under the alternative.
The likelihood ratio is monotone in the observation, and by the symmetry of
the shift family the threshold mu/2 equalizes false alarm and miss at
theta = 1 - Phi(mu/2).  This makes the family a constructive witness for
any target theta in (0, 1/2): mu = 2 * Phi^{-1}(1 - theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import ndtr, ndtri

from .errors import DomainError

__all__ = ["GaussianShiftModel", "model_from_theta"]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class GaussianShiftModel:
    """N(0,1) vs N(mu,1) testing problem, mu >= 0."""

    mu: float

    def __post_init__(self):
        if not (isinstance(self.mu, (int, float)) and math.isfinite(self.mu)
                and self.mu >= 0.0):
            raise DomainError(f"mu must be a finite nonnegative shift, got {self.mu!r}")

    @property
    def theta(self) -> float:
        """Common false-alarm/miss value of the equalizing threshold mu/2."""
        return float(ndtr(-self.mu / 2.0))

    @property
    def lrt_threshold(self) -> float:
        """Observation-space threshold of the robust (equalizing) rule."""
        return self.mu / 2.0

    def pdf_h0(self, y: float) -> float:
        return math.exp(-0.5 * y * y) / _SQRT_2PI

    def pdf_h1(self, y: float) -> float:
        return math.exp(-0.5 * (y - self.mu) ** 2) / _SQRT_2PI

    def cdf_h0(self, y: float) -> float:
        return float(ndtr(y))

    def cdf_h1(self, y: float) -> float:
        return float(ndtr(y - self.mu))

    def obs_threshold_for_lr(self, t: float) -> float:
        """Observation threshold equivalent to deciding 1 iff LR(y) >= t.

        LR(y) = exp(mu*y - mu**2/2), so y >= log(t)/mu + mu/2.
        """
        if self.mu <= 0.0:
            raise DomainError("mu must be positive to invert the likelihood ratio")
        if not t > 0.0:
            raise DomainError(f"likelihood-ratio threshold must be positive, got {t!r}")
        return math.log(t) / self.mu + self.mu / 2.0

    def error_probabilities(self, obs_threshold: float) -> tuple[float, float]:
        """(false alarm, miss) of the rule deciding 1 iff y > obs_threshold."""
        return 1.0 - self.cdf_h0(obs_threshold), self.cdf_h1(obs_threshold)

    def sample(self, rng, hypothesis: int, n: int):
        """Draw n observations under the given hypothesis from ``rng``."""
        y = rng.standard_normal(n)
        if hypothesis:
            y += self.mu
        return y


def model_from_theta(theta: float) -> GaussianShiftModel:
    """Shift model whose equalizing rule achieves the given theta.

    Round trip |model.theta - theta| <= 1e-12; theta outside (0, 1/2) has
    no positive-shift witness and is rejected.
    """
    t = float(theta)
    if not 0.0 < t < 0.5:
        raise DomainError(f"theta must lie in (0, 1/2), got {theta!r}")
    return GaussianShiftModel(mu=float(-2.0 * ndtri(t)))
