"""Minimax decentralized detection toolkit.

Closed-form error analysis of majority-vote (consensus) and fusion-center
sensor networks whose local detectors are prior-robust, the butterfly ROC
uncertainty geometry with its loss bounds, the two-sensor person-by-person
design constraints, and a seeded Monte Carlo simulator that cross-checks
every formula.
"""

from .binom import (
    FusionRule,
    OperatingPoint,
    binom_cdf,
    binom_pmf,
    binom_tail_ge,
    consensus_error,
    consensus_pf,
)
from .butterfly import (
    ButterflyRegion,
    LossReport,
    butterfly_area,
    butterfly_contains,
    butterfly_mc,
    line_l1,
    line_l2,
    max_single_loss,
    multi_loss,
    multi_loss_inf,
    multi_loss_report,
    optimize_multi_loss_x,
    prob_zero_loss,
    sup_single_loss,
)
from .errors import (
    ConfigurationError,
    ContractError,
    DomainError,
    InfeasibleCostsError,
    MinimaxddError,
)
from .fusion import (
    FusionMapQuery,
    IntersectResult,
    WfLossReport,
    equivalent_sensor_count,
    error_gap,
    fusion_derivatives,
    h_map,
    h_map_grid,
    intersect_l1,
    max_wf_loss,
    nonidentical_product_check,
    pf_fusion,
    pm_fusion,
    scan_thresholds,
    sup_wf_loss,
)
from .models import GaussianShiftModel, model_from_theta
from .pbpo import (
    CostTensor2,
    PbpoResult,
    RiskParams,
    check_prop1,
    is_decoupling,
    pbpo_thresholds,
    risk_two_sensor,
)
from .simulate import (
    GossipDiagnostics,
    NetworkConfig,
    TrialStats,
    estimate_errors,
    majority_gossip,
    ring_topology,
    run_wf_trial,
    run_wof_trial,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "MinimaxddError", "DomainError", "ContractError",
    "InfeasibleCostsError", "ConfigurationError",
    # binomial kernels
    "OperatingPoint", "FusionRule",
    "binom_tail_ge", "binom_cdf", "binom_pmf",
    "consensus_pf", "consensus_error",
    # butterfly geometry and loss bounds
    "ButterflyRegion", "LossReport",
    "line_l1", "line_l2", "butterfly_contains", "butterfly_area",
    "prob_zero_loss", "sup_single_loss", "max_single_loss",
    "multi_loss", "multi_loss_inf", "multi_loss_report",
    "optimize_multi_loss_x", "butterfly_mc",
    # fusion center
    "FusionMapQuery", "IntersectResult", "WfLossReport",
    "pf_fusion", "pm_fusion", "fusion_derivatives",
    "h_map", "h_map_grid", "intersect_l1", "error_gap",
    "max_wf_loss", "scan_thresholds", "sup_wf_loss",
    "nonidentical_product_check", "equivalent_sensor_count",
    # person-by-person design
    "CostTensor2", "RiskParams", "PbpoResult",
    "risk_two_sensor", "pbpo_thresholds", "is_decoupling", "check_prop1",
    # simulation
    "GaussianShiftModel", "model_from_theta",
    "NetworkConfig", "TrialStats", "GossipDiagnostics",
    "ring_topology", "majority_gossip",
    "run_wof_trial", "run_wf_trial", "estimate_errors",
]
