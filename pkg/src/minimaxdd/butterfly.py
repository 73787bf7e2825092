"""Butterfly uncertainty geometry and minimax loss bounds.

A robust likelihood-ratio test with equal false-alarm and miss probability
theta pins every compatible ROC curve inside a bowtie-shaped region of the
(P_F, P_M) unit square: two triangular wings meeting at the apex
(theta, theta), bounded by the line ``l1``: P_M = theta_hat * (1 - P_F)
and its coordinate-swapped mirror ``l2``, where theta_hat = theta/(1-theta).

The loss of robust against optimal decision making is the difference of
average error probabilities.  For one sensor its supremum over the region
has the closed form theta*(1-2*theta)/(2*(1-theta)); for K majority-voting
sensors the candidate optimal operating points sweep along l1 (parameterized
by x >= 1, with x -> infinity reaching the wing tip (0, theta_hat)) and the
loss becomes a difference of majority-vote polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .binom import OperatingPoint, consensus_pf, _check_prob, _check_sensors
from .errors import DomainError
from .search import grid_golden_max

__all__ = [
    "ButterflyRegion",
    "LossReport",
    "line_l1",
    "line_l2",
    "butterfly_contains",
    "butterfly_area",
    "prob_zero_loss",
    "sup_single_loss",
    "max_single_loss",
    "multi_loss",
    "multi_loss_inf",
    "multi_loss_report",
    "optimize_multi_loss_x",
    "butterfly_mc",
]

X_MAX = 1e6  # beyond this the finite-x loss is within float noise of the limit
_BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class ButterflyRegion:
    """The theta-parameterized bowtie of operating points, 0 < theta < 1/2."""

    theta: float

    def __post_init__(self):
        t = self.theta
        if not (isinstance(t, (int, float)) and 0.0 < t < 0.5):
            raise DomainError(f"theta must lie in (0, 1/2), got {t!r}")

    @property
    def theta_hat(self) -> float:
        return self.theta / (1.0 - self.theta)


@dataclass(frozen=True)
class LossReport:
    """Loss decomposition: robust-rule error minus candidate-optimal error."""

    loss: float
    optimum_point: OperatingPoint
    robust_error: float
    optimum_error: float

    def __post_init__(self):
        if abs(self.loss - (self.robust_error - self.optimum_error)) > 1e-12:
            raise DomainError("loss must equal robust_error - optimum_error")


def line_l1(region: ButterflyRegion, p_f: float) -> float:
    """Miss probability on the lower-left boundary line at false alarm p_f."""
    _check_prob(p_f, "p_f")
    return region.theta_hat * (1.0 - p_f)


def line_l2(region: ButterflyRegion, p_m: float) -> float:
    """False-alarm probability on the mirror line at miss probability p_m.

    l2 is the coordinate-swapped inverse of l1, so the returned value is
    the same affine map applied to p_m.
    """
    _check_prob(p_m, "p_m")
    return region.theta_hat * (1.0 - p_m)


def butterfly_contains(region: ButterflyRegion, pt: OperatingPoint) -> bool:
    """True iff the point lies in the bowtie (boundary included).

    The two boundary lines split the square into four sectors around the
    apex (theta, theta); the bowtie is the pair of sectors where the point
    sits on opposite sides of (or on) the two lines.
    """
    th = region.theta_hat
    side1 = pt.p_m - th * (1.0 - pt.p_f)          # sign against l1
    side2 = pt.p_f - th * (1.0 - pt.p_m)          # sign against l2
    if abs(side1) <= _BOUNDARY_TOL or abs(side2) <= _BOUNDARY_TOL:
        return True
    return (side1 > 0.0) != (side2 > 0.0)


def butterfly_area(theta: float) -> float:
    """Lebesgue area of the bowtie: theta*(1-2*theta)/(1-theta)."""
    region = ButterflyRegion(theta)
    t = region.theta
    return t * (1.0 - 2.0 * t) / (1.0 - t)


def prob_zero_loss(theta: float) -> float:
    """Point mass P(loss = 0) = 1 - theta under uniform operating points.

    Uniform (P_F, P_M) on the bowtie: the fraction whose average error is
    at least theta, i.e. where the robust rule is already optimal.
    """
    ButterflyRegion(theta)
    return 1.0 - theta


def sup_single_loss(theta: float) -> float:
    """Largest single-sensor loss over all distribution pairs achieving theta.

    Equals theta minus the average error theta_hat/2 at the wing tip
    (0, theta_hat), i.e. theta*(1-2*theta)/(2*(1-theta)).
    """
    t = float(theta)
    if not 0.0 <= t <= 0.5:
        raise DomainError(f"theta must lie in [0, 1/2], got {theta!r}")
    return 0.5 * t * (1.0 - 2.0 * t) / (1.0 - t)


def max_single_loss() -> tuple[float, float]:
    """Maximize the single-sensor loss bound over theta in [0, 1/2].

    Returns (theta_star, loss_star); the closed forms are
    theta_star = 1 - sqrt(2)/2 and loss_star = (3 - 2*sqrt(2))/2, and the
    grid-plus-golden-section search reproduces them to ~1e-10.
    """
    grid = np.linspace(0.0, 0.5, 64)
    return grid_golden_max(sup_single_loss, grid, tol=1e-10)


def _l1_point(theta: float, x: float) -> OperatingPoint:
    """Operating point on l1 swept by x >= 1; x=1 is the apex, x=inf the tip."""
    if math.isinf(x):
        return OperatingPoint(0.0, theta / (1.0 - theta))
    return OperatingPoint(theta / x, theta * (x - theta) / (x * (1.0 - theta)))


def _check_multi_args(K: int, theta: float) -> tuple[int, float]:
    K = _check_sensors(K)
    if K % 2 == 0:
        raise DomainError("K must be odd for the consensus loss")
    t = float(theta)
    if not 0.0 < t < 0.5:
        raise DomainError(f"theta must lie in (0, 1/2), got {theta!r}")
    return K, t


def multi_loss(K: int, theta: float, x: float) -> float:
    """Consensus-network loss for K sensors at the l1 point indexed by x.

    Robust sensors all sit at (theta, theta); the candidate optimum sits at
    (theta/x, theta*(x-theta)/(x*(1-theta))) on l1.  The loss is the
    majority-vote polynomial at theta minus the average of the polynomial
    at the two candidate coordinates.  x = math.inf is accepted as the
    distinguished wing-tip value.
    """
    K, t = _check_multi_args(K, theta)
    xf = float(x)
    if math.isnan(xf) or xf < 1.0:
        raise DomainError(f"x must lie in [1, inf], got {x!r}")
    if math.isinf(xf):
        return multi_loss_inf(K, t)
    pt = _l1_point(t, xf)
    robust = consensus_pf(K, t)
    return robust - 0.5 * (consensus_pf(K, pt.p_f) + consensus_pf(K, pt.p_m))


def multi_loss_inf(K: int, theta: float) -> float:
    """The x -> infinity specialization: candidate optimum at (0, theta_hat).

    P(Bin(K, theta) >= ceil(K/2)) - P(Bin(K, theta_hat) >= ceil(K/2))/2,
    both tails in log space; resolves sign changes even where the tails
    are of order 1e-30.
    """
    K, t = _check_multi_args(K, theta)
    th = t / (1.0 - t)
    return consensus_pf(K, t) - 0.5 * consensus_pf(K, th)


def multi_loss_report(K: int, theta: float, x: float) -> LossReport:
    """Full loss decomposition at the l1 point indexed by x."""
    K, t = _check_multi_args(K, theta)
    pt = _l1_point(t, float(x))
    robust = consensus_pf(K, t)
    optimum = 0.5 * (consensus_pf(K, pt.p_f) + consensus_pf(K, pt.p_m))
    return LossReport(loss=robust - optimum, optimum_point=pt,
                      robust_error=robust, optimum_error=optimum)


def optimize_multi_loss_x(K: int, theta: float) -> tuple[float, float]:
    """Maximize the consensus loss over x in [1, X_MAX] plus x = infinity.

    Log-spaced 64-point grid brackets the finite maximizer for golden
    section; the infinite endpoint is evaluated separately and wins ties.
    The returned loss is never negative since x = 1 yields exactly 0.
    """
    K, t = _check_multi_args(K, theta)

    def f(logx: float) -> float:
        return multi_loss(K, t, math.exp(logx))

    grid = np.linspace(0.0, math.log(X_MAX), 64)
    logx_best, loss_finite = grid_golden_max(f, grid, tol=1e-12)
    loss_inf = multi_loss_inf(K, t)
    if loss_inf >= loss_finite:
        x_opt, loss = math.inf, loss_inf
    else:
        x_opt, loss = math.exp(logx_best), loss_finite
    if loss < 0.0:  # x = 1 always achieves 0
        return 1.0, 0.0
    return x_opt, loss


def butterfly_mc(theta: float, samples: int, seed: int) -> dict[str, float]:
    """Rejection-sampling check of the bowtie area and the zero-loss mass.

    Draws uniform points on the unit square, keeps those inside the bowtie
    (vectorized two-line sector test), and estimates the region area and
    the fraction with average error >= theta.  Deterministic given the
    seed; standard errors are binomial-proportion errors.
    """
    region = ButterflyRegion(theta)
    if samples < 1:
        raise DomainError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    pf = rng.random(samples)
    pm = rng.random(samples)
    th = region.theta_hat
    side1 = pm - th * (1.0 - pf)
    side2 = pf - th * (1.0 - pm)
    inside = (side1 * side2) <= 0.0
    n_in = int(np.count_nonzero(inside))
    area_est = n_in / samples
    area_se = math.sqrt(area_est * (1.0 - area_est) / samples)
    if n_in == 0:
        return {"area_est": 0.0, "area_se": area_se,
                "zero_loss_est": math.nan, "zero_loss_se": math.nan,
                "samples_inside": 0}
    zero_loss = (pf[inside] + pm[inside]) / 2.0 >= theta
    ratio = float(np.count_nonzero(zero_loss)) / n_in
    ratio_se = math.sqrt(ratio * (1.0 - ratio) / n_in)
    return {"area_est": area_est, "area_se": area_se,
            "zero_loss_est": ratio, "zero_loss_se": ratio_se,
            "samples_inside": n_in}
