"""Exception hierarchy. CLI exit codes: config/parse -> 1, numerical -> 2, I/O -> 3."""


class WiretapGameError(Exception):
    """Base class for all package errors."""


class ConfigError(WiretapGameError):
    """Invalid scenario parameters or infeasible dimension/power combinations."""


class ScenarioParseError(ConfigError):
    """Malformed scenario file; carries the offending line/key in the message."""


class NumericalError(WiretapGameError):
    """Numerical conditioning failure (singular covariance, failed factorization)."""


class InconsistentPayoffError(NumericalError):
    """Estimated payoff matrix violates the basic rate orderings beyond tolerance.

    Signals an upstream estimation problem rather than a solver bug.
    """


class DegenerateGameError(NumericalError):
    """Payoff ties make the closed-form mixed equilibrium undefined."""
