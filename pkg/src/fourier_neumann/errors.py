"""Exception and warning classes shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NonConvergenceError(RuntimeError):
    """A quadrature or series did not reach the requested tolerance."""


class SingularityError(ValueError):
    """An integrand is not integrable at the origin against the measure."""


class StepSizeError(RuntimeError):
    """Finite differences with steps h and h/2 disagree beyond tolerance."""


class BesselAccuracyWarning(UserWarning):
    """A Bessel evaluation was requested outside the validated envelope."""


class QuadratureWarning(UserWarning):
    """The panel error estimate exceeds the configured tolerance."""
