"""Exception types shared by the verification modules."""


class InvalidParameter(ValueError):
    """A construction parameter lies outside its supported range."""


class InvalidArgument(ValueError):
    """An operation was called with arguments violating its precondition."""


class NumericFailure(ArithmeticError):
    """A numerical routine (quadrature, root finding) failed to converge."""


class NeedsMorePrecision(ArithmeticError):
    """The working precision cannot resolve the requested quantity."""


class BudgetExceeded(RuntimeError):
    """A search ran past its node or work budget.

    ``partial`` carries whatever was established before the budget ran out.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class CapExceeded(BudgetExceeded):
    """Cycle enumeration hit its cap; ``partial`` holds the running maximum."""
