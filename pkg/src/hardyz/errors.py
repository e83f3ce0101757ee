"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of a function."""


class RangeError(ValueError):
    """Argument outside the range an evaluator supports numerically."""


class PreconditionError(ValueError):
    """A sampled precondition (monotonicity, derivative bound, ...) failed."""


class ConvergenceError(RuntimeError):
    """An iterative solver did not converge; indicates a bug, not bad data."""


class ConsistencyError(ArithmeticError):
    """A computed quantity violated an identity it must satisfy."""
