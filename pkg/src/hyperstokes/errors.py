"""Exception types shared across the package."""


class HyperStokesError(Exception):
    pass


class DomainError(HyperStokesError, ValueError):
    """Argument outside the region where an operation is defined."""


class PoleError(HyperStokesError, ZeroDivisionError):
    """Evaluation at a pole of the gamma function."""


class PrecisionError(HyperStokesError):
    """Working precision too low for the requested cancellation."""


class ConvergenceError(HyperStokesError):
    """An iterative or adaptive procedure failed to converge."""


class BranchError(HyperStokesError):
    """Branch continuation detected a jump."""
