"""Numerically stable binomial kernels and the consensus-vote error polynomial.

All tail probabilities are accumulated in log space from log-binomial
coefficients (``gammaln``) and combined with ``logsumexp``.  Naive products
of pmf terms underflow long before the tails this package has to resolve
(majority tails of order 1e-30 appear for K around 50 already); the
log-space route keeps results meaningful down to the smallest normal
double (~1e-308).

Scalar probabilities are the public currency, but every kernel also
accepts an ndarray of probabilities and then returns an ndarray, which is
what the grid-based verification suites use.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import ContractError, DomainError

__all__ = [
    "OperatingPoint",
    "FusionRule",
    "binom_tail_ge",
    "binom_cdf",
    "binom_pmf",
    "consensus_pf",
    "consensus_error",
]

_LOG_HALF = math.log(0.5)


def _check_prob(p, name: str) -> np.ndarray:
    """Validate that ``p`` (scalar or array) lies in [0, 1]; return as array."""
    arr = np.asarray(p, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")
    return arr


def _check_sensors(K, name: str = "K") -> int:
    if not isinstance(K, (int, np.integer)) or K < 1:
        raise DomainError(f"{name} must be a positive integer, got {K!r}")
    return int(K)


def _maybe_scalar(values: np.ndarray, scalar_in: bool):
    return float(values) if scalar_in else values


def _log_tail_terms(K: int, j_lo: int, p: np.ndarray) -> np.ndarray:
    """log pmf terms for i = j_lo..K, shape p.shape + (K - j_lo + 1,).

    Caller guarantees 0 < p < 1 elementwise and 1 <= j_lo <= K.
    """
    i = np.arange(j_lo, K + 1, dtype=float)
    log_choose = gammaln(K + 1.0) - gammaln(i + 1.0) - gammaln(K - i + 1.0)
    lp = np.log(p)[..., None]
    lq = np.log1p(-p)[..., None]
    return log_choose + i * lp + (K - i) * lq


def binom_tail_ge(K: int, j: int, p) -> float | np.ndarray:
    """P(X >= j) for X ~ Binomial(K, p).

    Returns 1 for j <= 0 and 0 for j > K.  ``p`` may be a scalar or an
    ndarray of probabilities.
    """
    K = _check_sensors(K)
    arr = _check_prob(p, "p")
    scalar_in = arr.ndim == 0
    j = int(j)
    if j <= 0:
        return _maybe_scalar(np.ones_like(arr), scalar_in)
    if j > K:
        return _maybe_scalar(np.zeros_like(arr), scalar_in)

    out = np.empty_like(arr, dtype=float)
    at_zero = arr == 0.0
    at_one = arr == 1.0
    interior = ~(at_zero | at_one)
    out[at_zero] = 0.0  # j >= 1: needs at least one success
    out[at_one] = 1.0  # j <= K: certain
    if np.any(interior):
        terms = _log_tail_terms(K, j, arr[interior])
        out[interior] = np.exp(logsumexp(terms, axis=-1))
    np.clip(out, 0.0, 1.0, out=out)
    return _maybe_scalar(out, scalar_in)


def binom_cdf(k: int, K: int, p) -> float | np.ndarray:
    """P(X <= k) for X ~ Binomial(K, p), at most ``k`` successes.

    Evaluated as the mirrored upper tail P(K - X >= K - k) so that small
    cdf values keep full precision; the complement relation
    ``binom_cdf(k, K, p) == 1 - binom_tail_ge(K, k + 1, p)`` holds to
    better than 1e-14 absolute.
    """
    K = _check_sensors(K)
    arr = _check_prob(p, "p")
    scalar_in = arr.ndim == 0
    k = int(k)
    if k < 0:
        return _maybe_scalar(np.zeros_like(arr), scalar_in)
    if k >= K:
        return _maybe_scalar(np.ones_like(arr), scalar_in)
    # P(X <= k) = P(Bin(K, 1-p) >= K-k); evaluate directly in terms of p
    # to avoid the double complement 1 - (1 - p).
    out = np.empty_like(arr, dtype=float)
    at_zero = arr == 0.0
    at_one = arr == 1.0
    interior = ~(at_zero | at_one)
    out[at_zero] = 1.0  # k >= 0 and X = 0 surely
    out[at_one] = 0.0  # k < K and X = K surely
    if np.any(interior):
        q = arr[interior]
        i = np.arange(0, k + 1, dtype=float)
        log_choose = gammaln(K + 1.0) - gammaln(i + 1.0) - gammaln(K - i + 1.0)
        terms = log_choose + i * np.log(q)[..., None] + (K - i) * np.log1p(-q)[..., None]
        out[interior] = np.exp(logsumexp(terms, axis=-1))
    np.clip(out, 0.0, 1.0, out=out)
    return _maybe_scalar(out, scalar_in)


def binom_pmf(K: int, i: int, p) -> float | np.ndarray:
    """P(X = i) for X ~ Binomial(K, p), computed from log terms.

    K = 0 is allowed (the point mass at zero successes); the tail and cdf
    kernels require K >= 1.
    """
    arr = _check_prob(p, "p")
    scalar_in = arr.ndim == 0
    i = int(i)
    if isinstance(K, (int, np.integer)) and K == 0:
        fill = 1.0 if i == 0 else 0.0
        return _maybe_scalar(np.full_like(arr, fill), scalar_in)
    K = _check_sensors(K)
    if i < 0 or i > K:
        return _maybe_scalar(np.zeros_like(arr), scalar_in)
    out = np.zeros_like(arr, dtype=float)
    at_zero = arr == 0.0
    at_one = arr == 1.0
    interior = ~(at_zero | at_one)
    out[at_zero] = 1.0 if i == 0 else 0.0
    out[at_one] = 1.0 if i == K else 0.0
    if np.any(interior):
        q = arr[interior]
        log_choose = gammaln(K + 1.0) - gammaln(i + 1.0) - gammaln(K - i + 1.0)
        out[interior] = np.exp(log_choose + i * np.log(q) + (K - i) * np.log1p(-q))
    return _maybe_scalar(out, scalar_in)


def consensus_pf(K: int, p_f) -> float | np.ndarray:
    """System false-alarm probability of the majority vote over K sensors.

    Odd K: the strict-majority tail P(X >= (K+1)/2).  Even K: the strict
    tail P(X > K/2) plus half the probability of the K/2 tie, i.e. the
    fair-coin tie break.  By symmetry the same polynomial applied to the
    per-sensor miss probability gives the system miss probability.
    """
    K = _check_sensors(K)
    arr = _check_prob(p_f, "p_f")
    scalar_in = arr.ndim == 0

    out = np.empty_like(arr, dtype=float)
    at_zero = arr == 0.0
    at_one = arr == 1.0
    interior = ~(at_zero | at_one)
    out[at_zero] = 0.0
    out[at_one] = 1.0
    if np.any(interior):
        q = arr[interior]
        if K % 2 == 1:
            terms = _log_tail_terms(K, (K + 1) // 2, q)
        else:
            terms = _log_tail_terms(K, K // 2, q)
            terms[..., 0] += _LOG_HALF  # randomized tie at exactly K/2 votes
        out[interior] = np.exp(logsumexp(terms, axis=-1))
    np.clip(out, 0.0, 1.0, out=out)
    return _maybe_scalar(out, scalar_in)


def consensus_error(K: int, theta) -> float | np.ndarray:
    """Average error probability of a robust majority-vote network, odd K.

    Every sensor operates at the robust point (theta, theta), so false
    alarm and miss coincide and equal P(Binomial(K, theta) >= (K+1)/2).
    Monotone increasing in theta.
    """
    K = _check_sensors(K)
    if K % 2 == 0:
        raise ContractError(
            "consensus_error requires odd K; use consensus_pf for even sensor counts"
        )
    arr = _check_prob(theta, "theta")
    if np.any(arr > 0.5):
        raise DomainError("theta must lie in [0, 1/2]")
    return consensus_pf(K, theta)


@dataclass(frozen=True)
class OperatingPoint:
    """A (false alarm, miss) pair on the ROC plane."""

    p_f: float
    p_m: float

    def __post_init__(self):
        _check_prob(self.p_f, "p_f")
        _check_prob(self.p_m, "p_m")

    def average_error(self) -> float:
        return 0.5 * (self.p_f + self.p_m)


@dataclass(frozen=True)
class FusionRule:
    """A counting rule over K binary votes.

    Decides 1 when more than ``threshold`` sensors vote 1, 0 when fewer,
    and flips a Bernoulli(``tie_prob``) coin when the count equals the
    threshold exactly.  ``consensus(K)`` reproduces the majority vote with
    a fair tie coin; ``counting(K, k)`` is the fusion-center rule that
    never randomizes.
    """

    sensors: int
    threshold: int
    tie_prob: float = 0.0

    def __post_init__(self):
        _check_sensors(self.sensors, "sensors")
        if not isinstance(self.threshold, (int, np.integer)):
            raise DomainError(f"threshold must be an integer, got {self.threshold!r}")
        if not 0 <= self.threshold <= self.sensors:
            raise DomainError(
                f"threshold must lie in [0, {self.sensors}], got {self.threshold}"
            )
        _check_prob(self.tie_prob, "tie_prob")
        if self.tie_prob not in (0.0, 0.5):
            warnings.warn(
                f"tie_prob={self.tie_prob} is outside the analyzed set {{0, 1/2}}",
                UserWarning,
                stacklevel=2,
            )

    @classmethod
    def consensus(cls, K: int) -> "FusionRule":
        """Majority vote: fair tie coin for even K, unreachable tie for odd K."""
        K = _check_sensors(K)
        return cls(sensors=K, threshold=K // 2, tie_prob=0.5 if K % 2 == 0 else 0.0)

    @classmethod
    def counting(cls, K: int, k: int) -> "FusionRule":
        """Fusion-center rule: alarm iff more than k of K sensors alarm."""
        return cls(sensors=K, threshold=int(k), tie_prob=0.0)

    def system_pf(self, p_f) -> float | np.ndarray:
        """System false-alarm probability when each sensor alarms w.p. p_f."""
        tail = binom_tail_ge(self.sensors, self.threshold + 1, p_f)
        if self.tie_prob == 0.0:
            return tail
        return tail + self.tie_prob * binom_pmf(self.sensors, self.threshold, p_f)

    def system_pm(self, p_m) -> float | np.ndarray:
        """System miss probability when each sensor misses w.p. p_m.

        Under the alternative each sensor votes 1 w.p. 1 - p_m; the
        mirrored tail keeps precision for small results.
        """
        K, k = self.sensors, self.threshold
        below = binom_tail_ge(K, K - k + 1, p_m)  # P(votes <= k - 1)
        if self.tie_prob == 1.0:
            return below
        return below + (1.0 - self.tie_prob) * binom_pmf(K, K - k, p_m)
