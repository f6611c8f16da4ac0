"""Exception types shared across the toolkit.

Every failure mode that callers are expected to handle gets its own class so
the CLI can map them to exit diagnostics without string matching.
"""


class WetlandError(Exception):
    """Base class for all toolkit errors."""


class InvalidParams(WetlandError):
    """Model parameters violate the positivity constraints."""


class ConditionViolated(WetlandError):
    """A coexistence/positivity condition required by an operation fails."""


class RatioSingular(WetlandError):
    """The ratio-dependent response is evaluated too close to the origin."""


class NoConvergence(WetlandError):
    """An iterative solver exhausted its iteration budget."""


class SingularJacobian(WetlandError):
    """A Newton linear solve failed; reported rather than perturbed silently."""


class InvalidDt(WetlandError):
    """Time step violates the explicit stability bound or is nonpositive."""


class Blowup(WetlandError):
    """Integration produced non-finite, huge, or negative values.

    Carries the time at which the violation was detected.
    """

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class HypothesisFailed(WetlandError):
    """A theorem hypothesis (e.g. a positive decay rate) does not hold."""


class MalformedData(WetlandError):
    """An observation or configuration file cannot be parsed/validated."""
