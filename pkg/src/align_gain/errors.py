"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input violates an operation's precondition."""


class ConfigError(ValueError):
    """A species file or sweep definition is malformed."""


class ConvergenceError(ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance.

    The best available estimate and its error bound are kept on the
    exception so callers can decide whether to use them anyway.
    """

    def __init__(self, message, best_estimate, est_error):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.est_error = est_error
