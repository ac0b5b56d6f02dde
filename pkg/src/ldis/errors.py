"""Exception types shared across the package."""


class LdisError(Exception):
    """Base class for every error raised by ldis."""


class DomainError(LdisError, ValueError):
    """Argument lies outside the domain of the requested function."""


class UnsupportedError(LdisError, NotImplementedError):
    """Operation is not defined for this model kind."""


class ConvergenceError(LdisError, ArithmeticError):
    """An iterative solver failed to meet its tolerance."""


class QuadratureError(LdisError, ArithmeticError):
    """Adaptive integration did not converge within its panel budget."""


class InfeasibleError(LdisError, ValueError):
    """The constraint set of a variational problem is empty."""


class BudgetError(LdisError, ValueError):
    """A sample-size schedule asks for more replications than allowed."""


class AbsContError(LdisError, ValueError):
    """The nominal law is not absolutely continuous w.r.t. the proposal."""


class OracleUnavailable(LdisError, NotImplementedError):
    """No exact answer is available for this configuration."""


class ConfigError(LdisError, ValueError):
    """Malformed or inconsistent run configuration."""
