"""Seeded Monte Carlo simulation of the two detection network layouts.

One trial draws an observation per sensor from the Gaussian shift model,
forms local threshold decisions, and fuses them either by iterative
majority gossip on a connected topology (the no-fusion-center network) or
by a counting rule (the fusion-center network).

Randomness is counter-based: every (seed, hypothesis, trial) triple keys
its own Philox stream, so trials can run in any order or in parallel and
still reproduce bit for bit.  Within a trial the draw order is fixed:
observations first, then any tie coins in the order the protocol consults
them.

Gossip rounds are synchronous: each node replaces its bit by the majority
of itself and its neighbors, per-node ties resolved by a coin from the
trial stream.  On a ring this fixed point (or, for frozen/oscillating
patterns, the majority fallback after the round budget) reproduces the
direct majority vote with the fair tie coin, which the exhaustive test
suite checks for every initial pattern up to nine sensors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

from .binom import FusionRule
from .errors import ConfigurationError, ContractError, DomainError
from .models import GaussianShiftModel, model_from_theta
from .binom import OperatingPoint

__all__ = [
    "GaussianShiftModel",
    "model_from_theta",
    "NetworkConfig",
    "TrialStats",
    "GossipDiagnostics",
    "ring_topology",
    "majority_gossip",
    "run_wof_trial",
    "run_wf_trial",
    "estimate_errors",
]

_MAX_TRIAL_INDEX = 1 << 62


def ring_topology(K: int) -> tuple[tuple[int, ...], ...]:
    """Neighbor lists of the K-cycle; degenerate for K <= 2."""
    if K == 1:
        return ((),)
    if K == 2:
        return ((1,), (0,))
    return tuple(tuple(sorted(((i - 1) % K, (i + 1) % K))) for i in range(K))


def _validate_topology(K: int, topology) -> tuple[tuple[int, ...], ...]:
    if len(topology) != K:
        raise ConfigurationError(f"topology lists {len(topology)} nodes, expected {K}")
    nbrs = tuple(tuple(int(j) for j in row) for row in topology)
    for i, row in enumerate(nbrs):
        for j in row:
            if not 0 <= j < K:
                raise ConfigurationError(f"node {i} lists invalid neighbor {j}")
            if j == i:
                raise ConfigurationError(f"node {i} lists itself as a neighbor")
            if i not in nbrs[j]:
                raise ConfigurationError(f"link {i}->{j} is not symmetric")
    # connectivity by breadth-first search
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for j in nbrs[i]:
                if j not in seen:
                    seen.add(j)
                    nxt.append(j)
        frontier = nxt
    if len(seen) != K:
        raise ConfigurationError("topology is not connected")
    return nbrs


@dataclass(frozen=True)
class NetworkConfig:
    """Sensor count, topology, gossip round budget, seed, and trial count."""

    sensors: int
    seed: int
    trials: int
    topology: tuple[tuple[int, ...], ...] | None = None
    rounds: int | None = None

    def __post_init__(self):
        if not isinstance(self.sensors, (int, np.integer)) or self.sensors < 1:
            raise ConfigurationError(f"sensors must be >= 1, got {self.sensors!r}")
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < 2**64:
            raise ConfigurationError(f"seed must be a 64-bit unsigned int, got {self.seed!r}")
        if not isinstance(self.trials, (int, np.integer)) or self.trials < 1:
            raise ContractError(f"trials must be >= 1, got {self.trials!r}")
        topo = self.topology if self.topology is not None else ring_topology(self.sensors)
        object.__setattr__(self, "topology", _validate_topology(self.sensors, topo))
        rounds = self.rounds if self.rounds is not None else self.sensors
        if rounds < 1:
            raise ConfigurationError(f"rounds must be >= 1, got {rounds!r}")
        object.__setattr__(self, "rounds", int(rounds))


@dataclass
class GossipDiagnostics:
    """Counts trials that needed the majority fallback after the round budget."""

    fallbacks: int = 0


@dataclass(frozen=True)
class TrialStats:
    """Empirical error estimates with binomial-proportion standard errors."""

    false_alarms: int
    misses: int
    trials_h0: int
    trials_h1: int
    est_pf: float
    est_pm: float
    stderr_pf: float
    stderr_pm: float

    @classmethod
    def from_counts(cls, false_alarms: int, misses: int,
                    trials_h0: int, trials_h1: int) -> "TrialStats":
        if trials_h0 < 1 or trials_h1 < 1:
            raise ContractError("need at least one trial under each hypothesis")
        pf = false_alarms / trials_h0
        pm = misses / trials_h1
        return cls(false_alarms=false_alarms, misses=misses,
                   trials_h0=trials_h0, trials_h1=trials_h1,
                   est_pf=pf, est_pm=pm,
                   stderr_pf=(pf * (1.0 - pf) / trials_h0) ** 0.5,
                   stderr_pm=(pm * (1.0 - pm) / trials_h1) ** 0.5)


def _check_trial_args(hypothesis: int, trial_index: int) -> None:
    if hypothesis not in (0, 1):
        raise DomainError(f"hypothesis must be 0 or 1, got {hypothesis!r}")
    if not 0 <= trial_index < _MAX_TRIAL_INDEX:
        raise DomainError(f"trial_index must lie in [0, 2**62), got {trial_index!r}")


def _trial_rng(seed: int, hypothesis: int, trial_index: int) -> np.random.Generator:
    """Philox stream for one (seed, hypothesis, trial) triple.

    The triple selects a disjoint 2**128-block window of the keyed counter
    space, so trial streams never overlap and depend on nothing but the
    triple itself.
    """
    _check_trial_args(hypothesis, trial_index)
    bg = np.random.Philox(counter=np.array([0, 0, trial_index, hypothesis], dtype=np.uint64),
                          key=np.array([seed, 0], dtype=np.uint64))
    return np.random.Generator(bg)


class _TrialStreams:
    """Reusable generator that jumps to per-trial counter windows.

    Resetting the Philox counter in place reproduces ``_trial_rng``'s
    streams exactly while skipping the per-trial construction cost; the
    numpy Generator keeps no cross-call state, so the reset is complete.
    """

    def __init__(self, seed: int):
        self._bg = np.random.Philox(key=np.array([seed, 0], dtype=np.uint64))
        self._gen = np.random.Generator(self._bg)

    def rng(self, hypothesis: int, trial_index: int) -> np.random.Generator:
        _check_trial_args(hypothesis, trial_index)
        st = self._bg.state
        st["state"]["counter"][:] = (0, 0, trial_index, hypothesis)
        st["buffer_pos"] = 4
        st["has_uint32"] = 0
        st["uinteger"] = 0
        self._bg.state = st
        return self._gen


def majority_gossip(bits: Sequence[int], neighbors: tuple[tuple[int, ...], ...],
                    max_rounds: int,
                    tie_coin: Callable[[], int]) -> tuple[int | None, int]:
    """Synchronous self-inclusive local-majority gossip.

    Returns (consensus bit, rounds used) once all nodes agree, or
    (None, max_rounds) if the budget runs out first.  ``tie_coin`` is
    consulted once per tied node per round (never on odd-degree-plus-one
    neighborhoods such as rings).
    """
    state = list(int(b) for b in bits)
    n = len(state)
    if all(b == state[0] for b in state):
        return state[0], 0
    for rounds in range(1, max_rounds + 1):
        nxt = [0] * n
        for i in range(n):
            votes = state[i]
            for j in neighbors[i]:
                votes += state[j]
            total = len(neighbors[i]) + 1
            if 2 * votes > total:
                nxt[i] = 1
            elif 2 * votes < total:
                nxt[i] = 0
            else:
                nxt[i] = int(tie_coin())
        state = nxt
        if all(b == state[0] for b in state):
            return state[0], rounds
    return None, max_rounds


def _majority_with_tie(bits: Sequence[int], coin: Callable[[], int]) -> int:
    ones = sum(bits)
    n = len(bits)
    if 2 * ones > n:
        return 1
    if 2 * ones < n:
        return 0
    return int(coin())


def _local_bits(model: GaussianShiftModel, rng: np.random.Generator,
                hypothesis: int, K: int,
                local_point: OperatingPoint | None) -> list[int]:
    if local_point is None:
        y = model.sample(rng, hypothesis, K)
        return [int(v) for v in (y > model.lrt_threshold)]
    # Bernoulli sensors pinned to an explicit ROC point (used to exercise
    # operating points a threshold on this observation family cannot reach).
    u = rng.random(K)
    p_one = local_point.p_f if hypothesis == 0 else 1.0 - local_point.p_m
    return [int(v) for v in (u < p_one)]


def _wof_decision(model: GaussianShiftModel, config: NetworkConfig,
                  rng: np.random.Generator, hypothesis: int,
                  diagnostics: GossipDiagnostics | None,
                  local_point: OperatingPoint | None) -> int:
    bits = _local_bits(model, rng, hypothesis, config.sensors, local_point)
    coin = lambda: int(rng.integers(0, 2))
    decision, _ = majority_gossip(bits, config.topology, config.rounds, coin)
    if decision is not None:
        return decision
    if diagnostics is not None:
        diagnostics.fallbacks += 1
    return _majority_with_tie(bits, coin)


def _wf_decision(model: GaussianShiftModel, config: NetworkConfig,
                 rule: FusionRule, rng: np.random.Generator, hypothesis: int,
                 local_point: OperatingPoint | None) -> int:
    bits = _local_bits(model, rng, hypothesis, config.sensors, local_point)
    votes = sum(bits)
    if votes > rule.threshold:
        return 1
    if votes < rule.threshold:
        return 0
    return int(rng.random() < rule.tie_prob)


def run_wof_trial(model: GaussianShiftModel, config: NetworkConfig,
                  hypothesis: int, trial_index: int,
                  diagnostics: GossipDiagnostics | None = None,
                  local_point: OperatingPoint | None = None) -> int:
    """One trial of the gossip network; returns the network's decision.

    Gossip that fails to reach agreement within the round budget falls
    back to the direct majority of the initial local decisions (fair coin
    on an exact tie) and bumps the diagnostics counter.
    """
    rng = _trial_rng(config.seed, hypothesis, trial_index)
    return _wof_decision(model, config, rng, hypothesis, diagnostics, local_point)


def run_wf_trial(model: GaussianShiftModel, config: NetworkConfig,
                 rule: FusionRule, hypothesis: int, trial_index: int,
                 local_point: OperatingPoint | None = None) -> int:
    """One trial of the fusion-center network under the given counting rule."""
    if rule.sensors != config.sensors:
        raise ContractError(
            f"rule covers {rule.sensors} sensors but the network has {config.sensors}"
        )
    rng = _trial_rng(config.seed, hypothesis, trial_index)
    return _wf_decision(model, config, rule, rng, hypothesis, local_point)


def estimate_errors(model: GaussianShiftModel, config: NetworkConfig,
                    system: str | FusionRule, *,
                    threads: int = 1,
                    diagnostics: GossipDiagnostics | None = None,
                    local_point: OperatingPoint | None = None) -> TrialStats:
    """Estimate system false alarm and miss over ``config.trials`` per hypothesis.

    ``system`` is "wof" for the gossip network or a FusionRule for the
    fusion center.  Per-trial substreams make the counts independent of
    execution order, so the thread count never changes the result.
    """
    if isinstance(system, str):
        if system != "wof":
            raise DomainError(f"system must be 'wof' or a FusionRule, got {system!r}")
        rule = None
    elif isinstance(system, FusionRule):
        rule = system
    else:
        raise DomainError(f"system must be 'wof' or a FusionRule, got {system!r}")
    if config.trials < 1:
        raise ContractError("trials must be >= 1 under each hypothesis")

    if rule is not None and rule.sensors != config.sensors:
        raise ContractError(
            f"rule covers {rule.sensors} sensors but the network has {config.sensors}"
        )

    def run_range(hypothesis: int, start: int, stop: int) -> tuple[int, int]:
        errors = 0
        local_diag = GossipDiagnostics()
        streams = _TrialStreams(config.seed)
        for t in range(start, stop):
            rng = streams.rng(hypothesis, t)
            if rule is None:
                d = _wof_decision(model, config, rng, hypothesis, local_diag,
                                  local_point)
            else:
                d = _wf_decision(model, config, rule, rng, hypothesis, local_point)
            if d != hypothesis:
                errors += 1
        return errors, local_diag.fallbacks

    n = config.trials
    if threads <= 1:
        parts = [run_range(0, 0, n), run_range(1, 0, n)]
    else:
        chunk = -(-n // threads)
        spans = [(s, min(s + chunk, n)) for s in range(0, n, chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda job: run_range(job[0], job[1], job[2]),
                                  [(0, *sp) for sp in spans] + [(1, *sp) for sp in spans]))
    h0_parts = parts[:len(parts) // 2] if threads > 1 else parts[:1]
    h1_parts = parts[len(parts) // 2:] if threads > 1 else parts[1:]
    false_alarms = sum(p[0] for p in h0_parts)
    misses = sum(p[0] for p in h1_parts)
    if diagnostics is not None:
        diagnostics.fallbacks += sum(p[1] for p in parts)
    return TrialStats.from_counts(false_alarms, misses, n, n)
