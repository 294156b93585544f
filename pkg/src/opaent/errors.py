"""Exception hierarchy.

Everything numerical derives from :class:`OptoError` so callers (the sweep
runner, the CLI) can turn any failure into a per-point record or an exit code.
"""


class OptoError(Exception):
    """Base class for numerical failures in the simulation pipeline."""


class ThresholdError(OptoError):
    """Steady-state amplitude is singular: the OPA is at (or past) threshold."""


class ConvergenceError(OptoError):
    """The self-consistent mirror displacement iteration did not converge."""


class StabilityError(OptoError):
    """Stability could not be decided (eigenvalue iteration failed)."""


class UnstableError(OptoError):
    """A steady state was requested for an unstable drift matrix."""


class SingularError(OptoError):
    """The vectorized Lyapunov system is numerically singular."""


class UnphysicalError(OptoError):
    """A covariance matrix violates the uncertainty principle or is not positive."""


class NoStablePointError(OptoError):
    """Every gain in the requested bracket is dynamically unstable."""
