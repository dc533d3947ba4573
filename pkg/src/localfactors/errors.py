"""Exception and warning types shared across the package."""


class LocalFactorsError(Exception):
    """Base class for every error raised by this package."""


class DepthExceeded(LocalFactorsError):
    """A value was requested at finer p-adic resolution than the working depth."""


class PoleAtSample(LocalFactorsError):
    """A denominator (or gamma argument) sits on or too close to a pole."""


class DivergentRegion(LocalFactorsError):
    """The sample point lies outside the convergence region of a series."""


class BudgetExceeded(LocalFactorsError):
    """An enumeration oracle would need more work than its budget allows."""


class QuadratureNonconvergence(LocalFactorsError):
    """Adaptive quadrature could not meet its error target."""


class NonAdmissibleWarning(UserWarning):
    """A boundary value was accepted for limit reporting only."""
