"""Exception hierarchy shared across the package."""


class MinimaxddError(Exception):
    """Base class for all package errors."""


class DomainError(MinimaxddError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ContractError(MinimaxddError, ValueError):
    """Inputs are in-domain but violate a usage contract (e.g. an

    unnormalized joint distribution, or calling an odd-K-only routine
    with even K)."""


class InfeasibleCostsError(MinimaxddError, ValueError):
    """Bayesian costs produce a likelihood-ratio threshold with an

    invalid sign, so no threshold test exists for them."""


class ConfigurationError(MinimaxddError, ValueError):
    """A simulation configuration is unusable (e.g. disconnected topology)."""
