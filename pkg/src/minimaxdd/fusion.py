"""Fusion-center counting rules and the cost of living without one.

A fusion center collecting K binary votes and alarming when more than k of
them fire has system error probabilities that are binomial tails in the
per-sensor operating point.  Requiring the system to be robust (equal
system false alarm and miss) ties the per-sensor miss to the per-sensor
false alarm through a monotone map ``h_map``; intersecting that map with
the butterfly boundary line l1 yields, for each threshold k, the best
robust design.  The extreme thresholds k = 0 and k = K - 1 win, and the
resulting minimum error has the closed form
theta_hat**K / (1 + theta_hat**K).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .binom import (
    OperatingPoint,
    binom_pmf,
    binom_tail_ge,
    consensus_error,
    _check_prob,
    _check_sensors,
)
from .errors import DomainError
from .search import bisect_increasing, golden_max

__all__ = [
    "FusionMapQuery",
    "IntersectResult",
    "WfLossReport",
    "pf_fusion",
    "pm_fusion",
    "fusion_derivatives",
    "h_map",
    "h_map_grid",
    "intersect_l1",
    "error_gap",
    "max_wf_loss",
    "scan_thresholds",
    "sup_wf_loss",
    "nonidentical_product_check",
    "equivalent_sensor_count",
]


def _check_threshold(K: int, k, upper: int | None = None) -> int:
    if not isinstance(k, (int, np.integer)):
        raise DomainError(f"threshold k must be an integer, got {k!r}")
    hi = K if upper is None else upper
    if not 0 <= k <= hi:
        raise DomainError(f"threshold k must lie in [0, {hi}], got {k}")
    return int(k)


def _check_theta_open(theta) -> float:
    t = float(theta)
    if not 0.0 < t < 0.5:
        raise DomainError(f"theta must lie in (0, 1/2), got {theta!r}")
    return t


def _log_theta_hat(theta: float) -> float:
    return math.log(theta) - math.log1p(-theta)


def pf_fusion(p_f, K: int, k: int) -> float | np.ndarray:
    """System false alarm of the k-out-of-K counting rule: P(votes > k)."""
    K = _check_sensors(K)
    k = _check_threshold(K, k)
    return binom_tail_ge(K, k + 1, p_f)


def pm_fusion(p_m, K: int, k: int) -> float | np.ndarray:
    """System miss of the counting rule: P(votes <= k) under the alternative.

    Each sensor votes 1 w.p. 1 - p_m, so this is the mirrored tail
    P(Binomial(K, p_m) >= K - k), evaluated directly in p_m for precision.
    """
    K = _check_sensors(K)
    k = _check_threshold(K, k)
    return binom_tail_ge(K, K - k, p_m)


def fusion_derivatives(K: int, k: int, p_f: float, p_m: float) -> tuple[float, float]:
    """Derivatives of (pf_fusion w.r.t. p_f, pm_fusion w.r.t. p_m).

    d/dp P(Bin(K, p) >= j) = K * pmf(j-1; K-1, p); both derivatives are
    strictly positive on (0, 1), which is what makes h_map well defined.
    """
    K = _check_sensors(K)
    k = _check_threshold(K, k)
    dpf = K * binom_pmf(K - 1, k, p_f)
    dpm = K * binom_pmf(K - 1, K - k - 1, p_m)
    return dpf, dpm


@dataclass(frozen=True)
class FusionMapQuery:
    """Arguments of the robustness map: sensor count, threshold, false alarm."""

    K: int
    k: int
    p_f: float

    def __post_init__(self):
        K = _check_sensors(self.K)
        _check_threshold(K, self.k)
        _check_prob(self.p_f, "p_f")


def h_map(q: FusionMapQuery) -> float:
    """The per-sensor miss that makes the counting rule robust at q.p_f.

    Solves pm_fusion(p_m; K, k) = pf_fusion(q.p_f; K, k) by bisection on
    [0, 1]; the residual is strictly increasing in p_m, so the root is
    unique and always bracketed.  Maps 0 to 0 and 1 to 1 exactly.  k = K
    is rejected: that rule never alarms and admits no robust pair.
    """
    K, k = q.K, q.k
    if k == K:
        raise DomainError("k = K never alarms; no robust (p_f, p_m) pair exists")
    if q.p_f == 0.0:
        return 0.0
    if q.p_f == 1.0:
        return 1.0
    target = pf_fusion(q.p_f, K, k)

    def residual(p_m: float) -> float:
        return pm_fusion(p_m, K, k) - target

    return bisect_increasing(residual, 0.0, 1.0, xtol=1e-13)


def h_map_grid(K: int, k: int, p_f) -> np.ndarray:
    """Vectorized h_map over an array of false-alarm values.

    Simultaneous bisection: 52 halvings bring every interval below the
    scalar tolerance.  Used by the grid-based property suites.
    """
    K = _check_sensors(K)
    k = _check_threshold(K, k, upper=K - 1)
    pf = np.atleast_1d(_check_prob(p_f, "p_f")).astype(float)
    target = binom_tail_ge(K, k + 1, pf)
    lo = np.zeros_like(pf)
    hi = np.ones_like(pf)
    for _ in range(52):
        mid = 0.5 * (lo + hi)
        high_side = binom_tail_ge(K, K - k, mid) >= target
        hi = np.where(high_side, mid, hi)
        lo = np.where(high_side, lo, mid)
    out = 0.5 * (lo + hi)
    out[pf == 0.0] = 0.0
    out[pf == 1.0] = 1.0
    return out


@dataclass(frozen=True)
class IntersectResult:
    """Intersection of h_map with the l1 wing, as x_m = 1 - p_f*.

    ``at_apex`` flags the k = floor(K/2) boundary case where the open wing
    segment contains no interior intersection and the apex (theta, theta)
    is reported instead.
    """

    x_m: float
    point: OperatingPoint
    at_apex: bool = False


def intersect_l1(K: int, k: int, theta: float) -> IntersectResult:
    """Unique intersection of h_map with l1* = {(p_f, th*(1-p_f)): p_f < theta}.

    The residual pf_fusion(p_f) - pm_fusion(l1(p_f)) is strictly increasing
    along the wing (pf_fusion rises, the l1 coordinate falls), negative at
    p_f = 0 and positive at the apex for k < floor(K/2), so bisection
    always brackets the root.
    """
    K = _check_sensors(K)
    k = _check_threshold(K, k, upper=K // 2)
    t = _check_theta_open(theta)
    th = t / (1.0 - t)
    if k == K // 2:
        return IntersectResult(x_m=1.0 - t, point=OperatingPoint(t, t), at_apex=True)

    def residual(p_f: float) -> float:
        return pf_fusion(p_f, K, k) - pm_fusion(th * (1.0 - p_f), K, k)

    p_f_star = bisect_increasing(residual, 0.0, t, xtol=1e-13)
    p_m_star = th * (1.0 - p_f_star)
    # defensive: the pair must satisfy the robust-pair equation
    gap = pf_fusion(p_f_star, K, k) - pm_fusion(p_m_star, K, k)
    if abs(gap) > 1e-10:
        raise ArithmeticError(
            f"intersection residual {gap:.3e} exceeds 1e-10 for K={K}, k={k}, theta={t}"
        )
    return IntersectResult(x_m=1.0 - p_f_star, point=OperatingPoint(p_f_star, p_m_star))


def _f1_f2(K: int, k: int, x: float, theta_hat: float) -> tuple[float, float]:
    """The two truncated sums entering the fixed-point identity
    x**K = 1 / (theta_hat**K * f1 + f2) at an l1 intersection."""
    f1 = 1.0
    f2 = 1.0
    r1 = (1.0 - x * theta_hat) / (x * theta_hat)
    r2 = (1.0 - x) / x
    for i in range(1, k + 1):
        c = math.comb(K, i)
        f1 += c * r1**i
        f2 += c * r2**i
    return f1, f2


def error_gap(K: int, k: int, theta: float, method: str = "direct") -> float:
    """Excess error of threshold k over the optimal k = 0 design.

    direct: pm_fusion at the l1 intersection minus
    theta_hat**K / (1 + theta_hat**K).  series: the equivalent closed form
    theta_hat**K * x_m**K * f1 - theta_hat**K / (1 + theta_hat**K); the two
    agree to ~1e-10 and are strictly positive for 1 <= k <= floor(K/2).
    """
    K = _check_sensors(K)
    if not 1 <= k <= K // 2:
        raise DomainError(f"k must lie in [1, {K // 2}], got {k}")
    t = _check_theta_open(theta)
    th = t / (1.0 - t)
    res = intersect_l1(K, k, t)
    best = expit(K * _log_theta_hat(t))
    if method == "direct":
        return pm_fusion(res.point.p_m, K, k) - best
    if method == "series":
        f1, _ = _f1_f2(K, k, res.x_m, th)
        log_term = K * (_log_theta_hat(t) + math.log(res.x_m)) + math.log(f1)
        return math.exp(log_term) - best
    raise DomainError(f"method must be 'direct' or 'series', got {method!r}")


@dataclass(frozen=True)
class WfLossReport:
    """Loss of the robust consensus network against the best robust
    fusion-center design at the same theta."""

    theta: float
    K: int
    wof_error: float
    wf_error: float
    loss: float
    best_k: int
    best_point: OperatingPoint

    def __post_init__(self):
        if self.loss < -1e-15:
            raise DomainError("fusion-center loss cannot be negative")
        if self.best_k not in (0, self.K - 1):
            raise DomainError("optimal threshold must be 0 or K - 1")


def max_wf_loss(K: int, theta: float) -> WfLossReport:
    """Maximum performance loss of the consensus network for odd K.

    wof_error = P(Bin(K, theta) >= ceil(K/2)); wf_error is the k = 0
    closed form theta_hat**K / (1 + theta_hat**K) achieved at the l1 point
    with x_0 = (1 + theta_hat**K)**(-1/K).  The mirrored threshold K - 1
    achieves the same error on l2.
    """
    K = _check_sensors(K)
    if K % 2 == 0:
        raise DomainError("K must be odd")
    t = _check_theta_open(theta)
    lw = K * _log_theta_hat(t)
    wf = float(expit(lw))
    wof = consensus_error(K, t)
    log_x0 = -math.log1p(math.exp(lw)) / K if lw < 700 else -lw / K
    x0 = math.exp(log_x0)
    point = OperatingPoint(-math.expm1(log_x0), (t / (1.0 - t)) * x0)
    return WfLossReport(theta=t, K=K, wof_error=wof, wf_error=wf,
                        loss=wof - wf, best_k=0, best_point=point)


def scan_thresholds(K: int, theta: float) -> list[tuple[int, float]]:
    """Robust-design error for every threshold k in [0, K-1] by brute force.

    Thresholds above floor(K/2) mirror to K - 1 - k on the l2 wing and
    achieve identical error, so each is evaluated through its l1 twin.
    Returns (k, error) pairs in threshold order.
    """
    K = _check_sensors(K)
    t = _check_theta_open(theta)
    errors = {}
    for k in range(0, K // 2 + 1):
        res = intersect_l1(K, k, t)
        errors[k] = float(pm_fusion(res.point.p_m, K, k))
    out = []
    for k in range(0, K):
        out.append((k, errors[min(k, K - 1 - k)]))
    return out


def sup_wf_loss(K: int, grid_size: int = 2048) -> tuple[float, float]:
    """Maximize the consensus-vs-fusion-center loss over theta in (0, 1/2).

    Vectorized coarse grid (chunked to bound memory for large K) followed
    by golden-section refinement of the bracketing interval.  The supremum
    is strictly below 1/2 for every finite K and increases toward 1/2 with
    the peak migrating to theta of order 1/2 - O(1/sqrt(K)), so the grid
    must stay fine near the right endpoint.  Grid ties resolve to the
    lowest theta.
    """
    K = _check_sensors(K)
    if K % 2 == 0:
        raise DomainError("K must be odd")
    grid = np.linspace(1e-6, 0.5 - 1e-9, grid_size)
    best_val = -math.inf
    best_idx = 0
    chunk = 256
    for start in range(0, grid_size, chunk):
        thetas = grid[start:start + chunk]
        wof = consensus_error(K, thetas)
        lw = K * (np.log(thetas) - np.log1p(-thetas))
        vals = wof - expit(lw)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val = float(vals[i])
            best_idx = start + i

    lo = grid[max(best_idx - 1, 0)]
    hi = grid[min(best_idx + 1, grid_size - 1)]

    def f(t: float) -> float:
        return max_wf_loss(K, t).loss

    theta_star, loss_star = golden_max(f, lo, hi, tol=1e-10)
    if best_val > loss_star:
        return float(grid[best_idx]), best_val
    return theta_star, loss_star


def nonidentical_product_check(points: list[OperatingPoint],
                               theta: float) -> tuple[bool, float]:
    """Robustness condition for non-identical sensors under the k = 0 rule.

    With every sensor sampled from l1 (so 1 - p_f_i = p_m_i / theta_hat),
    the system is robust iff prod(p_m_i) + prod(1 - p_f_i) = 1; the product
    of misses is then the system error and matches the identical-sensor
    optimum whenever it equals theta_hat**K / (1 + theta_hat**K).
    """
    if not points:
        raise DomainError("points must be non-empty")
    t = _check_theta_open(theta)
    th = t / (1.0 - t)
    for pt in points:
        if abs(pt.p_m - th * (1.0 - pt.p_f)) > 1e-8:
            raise DomainError(f"point {pt} does not lie on l1 for theta={t}")
    prod_pm = math.prod(pt.p_m for pt in points)
    prod_qf = math.prod(1.0 - pt.p_f for pt in points)
    return abs(prod_pm + prod_qf - 1.0) <= 1e-10, prod_pm


def equivalent_sensor_count(K2: int, theta: float) -> int:
    """Sensors needed by a k = 0 fusion-center network to match K2 consensus
    sensors at the same theta.

    K1 = ceil(log(P / (1 - P)) / log(theta_hat)) with
    P = consensus_error(K2, theta); the resulting fusion-center error
    theta_hat**K1 / (1 + theta_hat**K1) is at most the consensus error.
    """
    K2 = _check_sensors(K2, "K2")
    if K2 % 2 == 0:
        raise DomainError("K2 must be odd")
    t = _check_theta_open(theta)
    pmo = consensus_error(K2, t)
    if pmo >= 0.5:
        raise DomainError("consensus error >= 1/2 leaves no valid log ratio")
    log_p_hat = math.log(pmo) - math.log1p(-pmo)
    ratio = log_p_hat / _log_theta_hat(t)
    return int(math.ceil(ratio - 1e-12))
