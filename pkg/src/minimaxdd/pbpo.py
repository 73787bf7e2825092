"""Two-sensor person-by-person threshold coupling and robustness checks.

Person-by-person optimization (PBPO) of a two-sensor Bayesian risk yields
likelihood-ratio tests whose thresholds are coupled through the other
sensor's decision rule.  Cost tensors with vanishing coupling terms
decouple the pair, each sensor then optimizing alone; that is the cost set
that can support a robust (equal false alarm and miss) network design.

The coupled conditions are necessary, not sufficient, so the fixed-point
solver reports non-convergence instead of failing.  As printed, the
coupling integrals on both sides of the threshold ratio weight the other
sensor's observation by the null density; a switch selects the variant
that weights the denominator by the alternative density instead, since
standard PBPO derivations suggest that form.  Neither is asserted as
ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .binom import OperatingPoint, consensus_pf, _check_sensors
from .errors import ContractError, DomainError, InfeasibleCostsError
from .models import GaussianShiftModel

__all__ = [
    "CostTensor2",
    "RiskParams",
    "PbpoResult",
    "risk_two_sensor",
    "pbpo_thresholds",
    "is_decoupling",
    "check_prop1",
]


@dataclass(frozen=True)
class CostTensor2:
    """Costs c_{i1 i2 j} of local decisions (i1, i2) under hypothesis j.

    The derived quantities c_a..c_d are the combinations entering sensor
    1's coupled threshold; ``derived(2)`` gives sensor 2's analogues
    (they coincide when the tensor is symmetric in the sensor indices).
    """

    c000: float
    c001: float
    c010: float
    c011: float
    c100: float
    c101: float
    c110: float
    c111: float

    def cost(self, i1: int, i2: int, j: int) -> float:
        return getattr(self, f"c{i1}{i2}{j}")

    @classmethod
    def from_array(cls, c) -> "CostTensor2":
        """Build from an array-like of shape (2, 2, 2) indexed [i1, i2, j]."""
        arr = np.asarray(c, dtype=float)
        if arr.shape != (2, 2, 2):
            raise DomainError(f"cost tensor must have shape (2, 2, 2), got {arr.shape}")
        return cls(*(float(arr[i1, i2, j])
                     for i1 in (0, 1) for i2 in (0, 1) for j in (0, 1)))

    @classmethod
    def minimum_error(cls) -> "CostTensor2":
        """Unit cost per wrong local decision (zero when correct).

        The additive structure zeroes both coupling terms, so this tensor
        decouples the sensors.
        """
        return cls.from_array([[[(i1 != j) + (i2 != j) for j in (0, 1)]
                                for i2 in (0, 1)] for i1 in (0, 1)])

    @property
    def c_a(self) -> float:
        return self.c110 - self.c010

    @property
    def c_b(self) -> float:
        return self.c100 - self.c000 + self.c010 - self.c110

    @property
    def c_c(self) -> float:
        return self.c011 - self.c111

    @property
    def c_d(self) -> float:
        return self.c001 - self.c101 + self.c111 - self.c011

    def derived(self, sensor: int = 1) -> tuple[float, float, float, float]:
        """(c_a, c_b, c_c, c_d) for the requested sensor's threshold."""
        if sensor == 1:
            return self.c_a, self.c_b, self.c_c, self.c_d
        if sensor == 2:
            return (self.c110 - self.c100,
                    self.c010 - self.c000 + self.c100 - self.c110,
                    self.c101 - self.c111,
                    self.c001 - self.c011 + self.c111 - self.c101)
        raise DomainError(f"sensor must be 1 or 2, got {sensor!r}")


@dataclass(frozen=True)
class RiskParams:
    """Prior probabilities (pi0, 1 - pi0) of the two hypotheses."""

    pi0: float

    def __post_init__(self):
        if not 0.0 <= self.pi0 <= 1.0:
            raise DomainError(f"pi0 must lie in [0, 1], got {self.pi0!r}")

    @property
    def pi1(self) -> float:
        return 1.0 - self.pi0


def risk_two_sensor(costs: CostTensor2, priors: RiskParams, joint) -> float:
    """Bayesian risk sum over decisions and hypotheses.

    ``joint[i1, i2, j]`` is the conditional probability of the decision
    pair under hypothesis j; each hypothesis slice must sum to 1 within
    1e-12.
    """
    arr = np.asarray(joint, dtype=float)
    if arr.shape != (2, 2, 2):
        raise ContractError(f"joint must have shape (2, 2, 2), got {arr.shape}")
    sums = arr.sum(axis=(0, 1))
    if np.any(np.abs(sums - 1.0) > 1e-12):
        raise ContractError(f"joint slices must each sum to 1, got sums {sums}")
    pri = (priors.pi0, priors.pi1)
    total = 0.0
    for i1 in (0, 1):
        for i2 in (0, 1):
            for j in (0, 1):
                total += pri[j] * costs.cost(i1, i2, j) * arr[i1, i2, j]
    return total


@dataclass(frozen=True)
class PbpoResult:
    """Coupled likelihood-ratio thresholds and the iteration count.

    ``converged`` is False when the alternation hit the iteration budget;
    the last iterate is still reported since PBPO is only a necessary
    condition and divergence is a finding, not a failure.
    """

    t1: float
    t2: float
    iterations: int
    converged: bool


def _lr_threshold(num: float, den: float) -> float:
    if not (num * den > 0.0):
        raise InfeasibleCostsError(
            f"threshold ratio {num}/{den} is not positive; "
            "no likelihood-ratio test exists for these costs and priors"
        )
    return num / den


def pbpo_thresholds(costs: CostTensor2, priors: RiskParams,
                    model: GaussianShiftModel, *,
                    denominator_density: str = "h0",
                    tol: float = 1e-10,
                    max_iterations: int = 10000) -> PbpoResult:
    """Solve the coupled two-sensor threshold conditions by alternation.

    Both thresholds start at their decoupled values, then each is updated
    in turn from the other sensor's current rule (the inner integrals are
    normal-cdf closed forms for the Gaussian shift model, so no quadrature
    error enters the fixed point).  Iteration stops when both thresholds
    move less than ``tol`` in one sweep.

    ``denominator_density`` selects the null-density weighting of the
    denominator integral as printed ("h0") or the alternative-density
    variant ("h1").
    """
    if denominator_density not in ("h0", "h1"):
        raise DomainError("denominator_density must be 'h0' or 'h1'")
    ca1, cb1, cc1, cd1 = costs.derived(1)
    ca2, cb2, cc2, cd2 = costs.derived(2)
    pi0, pi1 = priors.pi0, priors.pi1

    def update(t_other: float, ca: float, cb: float, cc: float, cd: float) -> float:
        tau = model.obs_threshold_for_lr(t_other)
        num = pi0 * (ca + cb * model.cdf_h0(tau))
        den_cdf = model.cdf_h0(tau) if denominator_density == "h0" else model.cdf_h1(tau)
        den = pi1 * (cc + cd * den_cdf)
        return _lr_threshold(num, den)

    t1 = _lr_threshold(pi0 * ca1, pi1 * cc1)
    t2 = _lr_threshold(pi0 * ca2, pi1 * cc2)
    for iteration in range(1, max_iterations + 1):
        new_t1 = update(t2, ca1, cb1, cc1, cd1)
        new_t2 = update(new_t1, ca2, cb2, cc2, cd2)
        delta = max(abs(new_t1 - t1), abs(new_t2 - t2))
        t1, t2 = new_t1, new_t2
        if delta < tol:
            return PbpoResult(t1=t1, t2=t2, iterations=iteration, converged=True)
    return PbpoResult(t1=t1, t2=t2, iterations=max_iterations, converged=False)


def is_decoupling(costs: CostTensor2) -> bool:
    """True iff both coupling terms vanish exactly (c_b = 0 and c_d = 0)."""
    return costs.c_b == 0.0 and costs.c_d == 0.0


def check_prop1(K: int, local: OperatingPoint) -> tuple[bool, OperatingPoint]:
    """System operating point of K identical majority-voting sensors.

    False alarm and miss pass through the same monotone vote polynomial,
    so the system is robust (equal coordinates within 1e-12) exactly when
    the local point sits on the diagonal.
    """
    K = _check_sensors(K)
    if K % 2 == 0:
        raise DomainError("K must be odd")
    system = OperatingPoint(consensus_pf(K, local.p_f), consensus_pf(K, local.p_m))
    return abs(system.p_f - system.p_m) <= 1e-12, system
